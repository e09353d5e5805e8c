use super::{StateId, Wfa};

/// States reachable from an initial state.
pub fn accessible(a: &Wfa) -> Vec<bool> {
    let mut seen = vec![false; a.num_states()];
    let mut stack: Vec<StateId> = a.initials().keys().copied().collect();
    for &q in &stack {
        seen[q] = true;
    }
    while let Some(q) = stack.pop() {
        for t in a.out(q) {
            if !seen[t.dst] {
                seen[t.dst] = true;
                stack.push(t.dst);
            }
        }
    }
    seen
}

/// States from which a final state is reachable.
pub fn coaccessible(a: &Wfa) -> Vec<bool> {
    let mut preds: Vec<Vec<StateId>> = vec![Vec::new(); a.num_states()];
    for t in a.transitions() {
        preds[t.dst].push(t.src);
    }
    let mut seen = vec![false; a.num_states()];
    let mut stack: Vec<StateId> = a.finals().keys().copied().collect();
    for &q in &stack {
        seen[q] = true;
    }
    while let Some(q) = stack.pop() {
        for &p in &preds[q] {
            if !seen[p] {
                seen[p] = true;
                stack.push(p);
            }
        }
    }
    seen
}

pub fn is_trim(a: &Wfa) -> bool {
    let acc = accessible(a);
    let coacc = coaccessible(a);
    a.states().all(|q| acc[q] && coacc[q])
}

/// Restriction to the useful states, renumbered preserving their order.
pub fn trim(a: &Wfa) -> Wfa {
    let acc = accessible(a);
    let coacc = coaccessible(a);
    let keep: Vec<bool> = a.states().map(|q| acc[q] && coacc[q]).collect();
    a.restrict(&keep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::families::a0;
    use crate::text::{parse_wfa, write_wfa};

    #[test]
    fn trim_is_idempotent() {
        let a = a0();
        assert!(is_trim(&a));
        assert_eq!(write_wfa(&trim(&a)), write_wfa(&a));
    }

    #[test]
    fn trim_drops_unreachable_state() {
        let mut text = write_wfa(&a0());
        text.push_str("trans 4 3 a 1\n");
        let a = parse_wfa(&text).unwrap();
        assert_eq!(a.num_states(), 5);
        assert!(!is_trim(&a));
        let t = trim(&a);
        assert_eq!(t.num_states(), 4);
        assert_eq!(write_wfa(&t), write_wfa(&a0()));
    }

    #[test]
    fn no_final_state_trims_to_empty() {
        let a = parse_wfa("wfa v1 tropical\ninitial 0 0\ntrans 0 1 a 1\n").unwrap();
        let t = trim(&a);
        assert_eq!(t.num_states(), 0);
        assert_eq!(t.num_transitions(), 0);
        assert!(t.initials().is_empty());
    }

    #[test]
    fn renumbering_preserves_order() {
        let a =
            parse_wfa("wfa v1 tropical\ninitial 1 0\nfinal 3 0\ntrans 1 3 a 1\ntrans 0 2 a 1\n")
                .unwrap();
        let t = trim(&a);
        assert_eq!(t.num_states(), 2);
        assert!(t.is_initial(0) && t.is_final(1));
    }
}
