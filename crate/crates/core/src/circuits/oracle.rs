use crate::error::{Error, Result};
use crate::formula::Lit;
use crate::statevector::MAX_QUBITS;

use super::{CircuitGadget, Gate, OracleSpec};

/// Clause ancillas allowed before the builder refuses.
pub const DEFAULT_ANCILLA_BUDGET: usize = 16;

/// Per-clause plan after normalising the literal list.
enum ClausePlan {
    /// Contains some `v` and `¬v`: always true.
    Tautology,
    /// Deduplicated literals.
    Lits(Vec<Lit>),
}

fn plan_clause(clause: &[Lit]) -> ClausePlan {
    let mut lits: Vec<Lit> = Vec::with_capacity(clause.len());
    for &lit in clause {
        if lits.iter().any(|l| l.var == lit.var && l.negated != lit.negated) {
            return ClausePlan::Tautology;
        }
        if !lits.contains(&lit) {
            lits.push(lit);
        }
    }
    ClausePlan::Lits(lits)
}

/// Marking oracle for a CNF formula: `|x⟩|0…0⟩|b⟩ ↦ |x⟩|0…0⟩|b ⊕ φ(x)⟩`.
///
/// Layout: the searched register (variables, then the extra qubit if any),
/// one ancilla per clause, and the target qubit last. Each ancilla is set to
/// 1 and flipped back exactly when every literal of its clause is false, so
/// it holds the clause value. A multi-controlled X over all ancillas (and the
/// extra qubit) flips the target, then the clause layer is uncomputed.
pub fn build_marking_oracle(spec: &OracleSpec, ancilla_budget: usize) -> Result<CircuitGadget> {
    let formula = &spec.formula;
    let n = formula.num_vars();
    let m = formula.clauses().len();
    if m > ancilla_budget {
        return Err(Error::AncillaBudget {
            clauses: m,
            budget: ancilla_budget,
        });
    }
    let s = spec.search_qubits();
    let total = s + m + 1;
    if total > MAX_QUBITS {
        return Err(Error::QubitCount {
            requested: total,
            min: 1,
            max: MAX_QUBITS,
        });
    }
    let target = s + m;

    let mut clause_layer = CircuitGadget::new(total, s);
    for (c, clause) in formula.clauses().iter().enumerate() {
        let anc = s + c;
        clause_layer.push(Gate::X, anc);
        match plan_clause(clause) {
            ClausePlan::Tautology => {}
            ClausePlan::Lits(lits) => {
                let positives: Vec<usize> =
                    lits.iter().filter(|l| !l.negated).map(|l| l.var).collect();
                for &v in &positives {
                    clause_layer.push(Gate::X, v);
                }
                clause_layer.push_controlled(Gate::X, lits.iter().map(|l| l.var).collect(), anc);
                for &v in &positives {
                    clause_layer.push(Gate::X, v);
                }
            }
        }
    }

    let mut gadget = CircuitGadget::new(total, s);
    gadget.append(&clause_layer);
    let mut controls: Vec<usize> = (s..s + m).collect();
    if spec.extra_qubit {
        controls.push(n);
    }
    gadget.push_controlled(Gate::X, controls, target);
    gadget.append(&clause_layer.adjoint());
    gadget.set_marking_target(Some(target));
    Ok(gadget)
}

/// Phase oracle from a marking oracle by preparing its target in `|−⟩`:
/// `|x⟩ ↦ (−1)^{φ(x)} |x⟩`, with the target returned to `|0⟩`.
pub fn marking_to_phase(marking: &CircuitGadget) -> Result<CircuitGadget> {
    let t = marking
        .marking_target()
        .ok_or_else(|| Error::InvalidArgument("gadget has no marking target".into()))?;
    let mut g = CircuitGadget::new(marking.num_qubits(), marking.search_qubits());
    g.push(Gate::X, t);
    g.push(Gate::H, t);
    g.append(marking);
    g.push(Gate::H, t);
    g.push(Gate::X, t);
    Ok(g)
}
