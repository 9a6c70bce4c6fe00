use super::formula::Formula;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Truth {
    True,
    False,
    Open,
}

fn truth(phi: &Formula) -> Truth {
    match phi {
        Formula::Eq(a, b) if a == b => Truth::True,
        Formula::Not(a) => match truth(a) {
            Truth::True => Truth::False,
            Truth::False => Truth::True,
            Truth::Open => Truth::Open,
        },
        // Carriers are nonempty, so a quantified constant keeps its value.
        Formula::Forall(_, a) | Formula::Exists(_, a) => truth(a),
        _ => Truth::Open,
    }
}

/// Eliminates subformulas that are trivially true or false, such as `t = t`
/// and `∃σ x (x = x)`, together with the connectives they decide.
pub fn simplify_truth(phi: &Formula) -> Formula {
    match phi {
        Formula::Eq(..) | Formula::Pred(..) => phi.clone(),
        Formula::Not(a) => Formula::not(simplify_truth(a)),
        Formula::And(a, b) => {
            let (a, b) = (simplify_truth(a), simplify_truth(b));
            match (truth(&a), truth(&b)) {
                (Truth::False, _) => a,
                (_, Truth::False) => b,
                (Truth::True, _) => b,
                (_, Truth::True) => a,
                _ => Formula::and(a, b),
            }
        }
        Formula::Or(a, b) => {
            let (a, b) = (simplify_truth(a), simplify_truth(b));
            match (truth(&a), truth(&b)) {
                (Truth::True, _) => a,
                (_, Truth::True) => b,
                (Truth::False, _) => b,
                (_, Truth::False) => a,
                _ => Formula::or(a, b),
            }
        }
        Formula::Implies(a, b) => {
            let (a, b) = (simplify_truth(a), simplify_truth(b));
            match (truth(&a), truth(&b)) {
                (Truth::False, _) => Formula::not(a),
                (_, Truth::True) => b,
                (Truth::True, _) => b,
                (_, Truth::False) => Formula::not(a),
                _ => Formula::implies(a, b),
            }
        }
        Formula::Iff(a, b) => {
            let (a, b) = (simplify_truth(a), simplify_truth(b));
            match (truth(&a), truth(&b)) {
                (Truth::True, _) => b,
                (_, Truth::True) => a,
                (Truth::False, _) => Formula::not(b),
                (_, Truth::False) => Formula::not(a),
                _ => Formula::iff(a, b),
            }
        }
        Formula::Forall(v, a) => {
            let a = simplify_truth(a);
            if truth(&a) != Truth::Open && !a.free_variables().contains(v) {
                a
            } else {
                Formula::forall(v, a)
            }
        }
        Formula::Exists(v, a) => {
            let a = simplify_truth(a);
            if truth(&a) != Truth::Open && !a.free_variables().contains(v) {
                a
            } else {
                Formula::exists(v, a)
            }
        }
    }
}
