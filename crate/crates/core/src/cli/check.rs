use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::Subcommand;

use super::{load_code, load_lts, CmdResult, Output, RelArg, EXIT_FAIL, EXIT_PASS};
use crate::adaptor::{check_adaptor_theorem, is_determinate, solve_winning};
use crate::code::CodeMap;
use crate::label::CompatRel;
use crate::lts::Lts;
use crate::operators::{concretize, contract, is_icomplete, refine};
use crate::simulation::{find_isomorphism_reachable, find_simulation, simulates, Bijection, Relation};

#[derive(Debug, Subcommand)]
pub(super) enum CheckCommand {
    /// LEFT ⊑ RIGHT.
    Simulation { left: PathBuf, right: PathBuf },
    /// LEFT ≅ RIGHT on reachable states.
    Isomorphism { left: PathBuf, right: PathBuf },
    /// The code is complete for MACHINE under the relation.
    Icomplete {
        #[arg(long)]
        code: PathBuf,
        #[arg(long, value_enum, default_value = "identity")]
        rel: RelArg,
        machine: PathBuf,
    },
    /// The root is winning for every abstract input (or the given ones).
    Winning {
        #[arg(long)]
        code: PathBuf,
        /// Abstract input to check; repeatable. Defaults to all leaf inputs.
        #[arg(long = "input")]
        inputs: Vec<String>,
    },
    /// The code is determinate.
    Determinate {
        #[arg(long)]
        code: PathBuf,
    },
    /// Refinement is left adjoint to contraction, for CONCRETE over the
    /// source alphabet and ABSTRACT over the target alphabet.
    Galois1 {
        #[arg(long)]
        code: PathBuf,
        concrete: PathBuf,
        #[arg(name = "ABSTRACT")]
        abstract_machine: PathBuf,
    },
    /// Concretization is right adjoint to contraction when the code is
    /// complete for CONCRETE.
    Galois2 {
        #[arg(long)]
        code: PathBuf,
        #[arg(long, value_enum, default_value = "identity")]
        rel: RelArg,
        concrete: PathBuf,
        #[arg(name = "ABSTRACT")]
        abstract_machine: PathBuf,
    },
    /// Contracting the concretization gives the machine back.
    Insertion {
        #[arg(long)]
        code: PathBuf,
        #[arg(long, value_enum, default_value = "identity")]
        rel: RelArg,
        machine: PathBuf,
    },
    /// Contraction along a composed code equals two contractions.
    ComposeAlpha {
        #[arg(long)]
        outer: PathBuf,
        #[arg(long)]
        inner: PathBuf,
        machine: PathBuf,
    },
    /// Refinement along a composed code equals two refinements.
    ComposeRho {
        #[arg(long)]
        outer: PathBuf,
        #[arg(long)]
        inner: PathBuf,
        machine: PathBuf,
    },
    /// The adaptor running against MACHINE behaves like the contraction.
    AdaptorTheorem {
        #[arg(long)]
        code: PathBuf,
        machine: PathBuf,
    },
    /// Concretization along a composed code differs from two
    /// concretizations up to isomorphism but not up to mutual simulation.
    GammaNoncompose {
        #[arg(long)]
        outer: PathBuf,
        #[arg(long)]
        inner: PathBuf,
        #[arg(long, value_enum, default_value = "identity")]
        rel: RelArg,
        machine: PathBuf,
    },
}

fn verdict(name: &str, ok: bool, body: &str) -> (i32, String) {
    let mut text = format!("{} {name}\n", if ok { "PASS" } else { "FAIL" });
    text.push_str(body);
    (if ok { EXIT_PASS } else { EXIT_FAIL }, text)
}

fn relation_lines(title: &str, rel: &Relation) -> String {
    let mut s = format!("{title}:\n");
    for (p, q) in &rel.pairs {
        let _ = writeln!(s, "  {p} -> {q}");
    }
    s
}

fn bijection_lines(f: &Bijection) -> String {
    let mut s = String::from("bijection:\n");
    for (p, q) in f {
        let _ = writeln!(s, "  {p} -> {q}");
    }
    s
}

fn fact(s: &mut String, what: &str, value: bool) {
    let _ = writeln!(s, "{what}: {value}");
}

fn over_domain(m: &Lts, code: &CodeMap) -> bool {
    code.covers_lts(m)
}

fn iso_check(name: &str, left: &Lts, right: &Lts) -> crate::error::Result<(i32, String)> {
    Ok(match find_isomorphism_reachable(left, right)? {
        Some(f) => verdict(name, true, &bijection_lines(&f)),
        None => verdict(name, false, "no isomorphism between the reachable parts\n"),
    })
}

pub(super) fn run(cmd: CheckCommand, out: &Output) -> CmdResult {
    let (code, text) = match cmd {
        CheckCommand::Simulation { left, right } => {
            let (m, n) = (load_lts(&left)?, load_lts(&right)?);
            match find_simulation(&m, &n) {
                Some(rel) => verdict("simulation", true, &relation_lines("relation", &rel)),
                None => verdict(
                    "simulation",
                    false,
                    "the initial pair is not in the greatest simulation\n",
                ),
            }
        }
        CheckCommand::Isomorphism { left, right } => iso_check("isomorphism", &load_lts(&left)?, &load_lts(&right)?)?,
        CheckCommand::Icomplete { code, rel, machine } => {
            let rel: CompatRel = rel.into();
            match is_icomplete(&load_code(&code)?, &rel, &load_lts(&machine)?)? {
                None => verdict("icomplete", true, ""),
                Some(w) => verdict(
                    "icomplete",
                    false,
                    &format!(
                        "witness: state={} node={} code-label={} machine-label={}\n",
                        w.state, w.node, w.code_label, w.machine_label
                    ),
                ),
            }
        }
        CheckCommand::Winning { code, inputs } => {
            let tree = load_code(&code)?.to_tree();
            let table = solve_winning(&tree)?;
            let wanted: BTreeSet<String> = if inputs.is_empty() {
                tree.leaf_labels()
                    .values()
                    .filter_map(|l| l.input().map(str::to_string))
                    .collect()
            } else {
                inputs.into_iter().collect()
            };
            let mut body = String::new();
            let mut ok = true;
            for x in &wanted {
                let inputs = table.winning_inputs(tree.root(), x);
                let win = table.is_winning(tree.root(), x);
                ok &= win;
                let with: Vec<&str> = inputs.iter().map(String::as_str).collect();
                let _ = writeln!(
                    body,
                    "{x}: {} [{}]",
                    if win { "winning" } else { "not winning" },
                    with.join(", ")
                );
            }
            verdict("winning", ok, &body)
        }
        CheckCommand::Determinate { code } => match is_determinate(&load_code(&code)?.to_tree())? {
            None => verdict("determinate", true, ""),
            Some(w) => verdict(
                "determinate",
                false,
                &format!(
                    "witness: node={} abstract-input={} inputs={},{}\n",
                    w.node, w.abstract_input, w.first, w.second
                ),
            ),
        },
        CheckCommand::Galois1 {
            code,
            concrete,
            abstract_machine,
        } => {
            let (code, m, n) = (load_code(&code)?, load_lts(&concrete)?, load_lts(&abstract_machine)?);
            let left = simulates(&refine(&code, &n)?, &m);
            let right = simulates(&n, &contract(&code, &m)?);
            let dom = over_domain(&n, &code);
            let det = m.is_deterministic(&CompatRel::Identity)?;
            let mut body = String::new();
            fact(&mut body, "refine(abstract) ⊑ concrete", left);
            fact(&mut body, "abstract ⊑ contract(concrete)", right);
            fact(&mut body, "abstract uses only coded labels", dom);
            fact(&mut body, "concrete deterministic", det);
            let ok = (!dom || !left || right) && (!det || !right || left);
            verdict("galois1", ok, &body)
        }
        CheckCommand::Galois2 {
            code,
            rel,
            concrete,
            abstract_machine,
        } => {
            let rel: CompatRel = rel.into();
            let (code, n, m) = (load_code(&code)?, load_lts(&concrete)?, load_lts(&abstract_machine)?);
            let complete = is_icomplete(&code, &rel, &n)?.is_none();
            let left = simulates(&contract(&code, &n)?, &m);
            let right = simulates(&n, &concretize(&code, &rel, &m)?);
            let mut body = String::new();
            fact(&mut body, "code complete for concrete", complete);
            fact(&mut body, "contract(concrete) ⊑ abstract", left);
            fact(&mut body, "concrete ⊑ concretize(abstract)", right);
            verdict("galois2", !complete || left == right, &body)
        }
        CheckCommand::Insertion { code, rel, machine } => {
            let rel: CompatRel = rel.into();
            let (code, m) = (load_code(&code)?, load_lts(&machine)?);
            if !over_domain(&m, &code) {
                verdict(
                    "insertion",
                    true,
                    "machine uses labels outside the code domain; nothing to check\n",
                )
            } else {
                iso_check("insertion", &m, &contract(&code, &concretize(&code, &rel, &m)?)?)?
            }
        }
        CheckCommand::ComposeAlpha { outer, inner, machine } => {
            let (r, s, m) = (load_code(&outer)?, load_code(&inner)?, load_lts(&machine)?);
            let direct = contract(&r.compose(&s)?, &m)?;
            let stepwise = contract(&s, &contract(&r, &m)?)?;
            iso_check("compose-alpha", &direct, &stepwise)?
        }
        CheckCommand::ComposeRho { outer, inner, machine } => {
            let (r, s, m) = (load_code(&outer)?, load_code(&inner)?, load_lts(&machine)?);
            if !r.covers_image_of(&s) {
                verdict(
                    "compose-rho",
                    true,
                    "inner code words use letters outside the outer domain; nothing to check\n",
                )
            } else {
                let direct = refine(&r.compose(&s)?, &m)?;
                let stepwise = refine(&r, &refine(&s, &m)?)?;
                iso_check("compose-rho", &direct, &stepwise)?
            }
        }
        CheckCommand::AdaptorTheorem { code, machine } => {
            let check = check_adaptor_theorem(&load_code(&code)?.to_tree(), &load_lts(&machine)?)?;
            let mut body = String::new();
            fact(
                &mut body,
                "composition delay-simulated by implementation",
                check.forward.is_some(),
            );
            fact(
                &mut body,
                "implementation delay-simulated by composition",
                check.backward.is_some(),
            );
            verdict("adaptor-theorem", check.holds(), &body)
        }
        CheckCommand::GammaNoncompose {
            outer,
            inner,
            rel,
            machine,
        } => {
            let rel: CompatRel = rel.into();
            let (r, s, m) = (load_code(&outer)?, load_code(&inner)?, load_lts(&machine)?);
            let direct = concretize(&r.compose(&s)?, &rel, &m)?;
            let stepwise = concretize(&r, &rel, &concretize(&s, &rel, &m)?)?;
            let iso = find_isomorphism_reachable(&direct, &stepwise)?.is_some();
            let fwd = simulates(&direct, &stepwise);
            let bwd = simulates(&stepwise, &direct);
            let mut body = String::new();
            let _ = writeln!(
                body,
                "composed: {} states, stepwise: {} states",
                direct.reachable_states().len(),
                stepwise.reachable_states().len()
            );
            fact(&mut body, "isomorphic", iso);
            fact(&mut body, "composed ⊑ stepwise", fwd);
            fact(&mut body, "stepwise ⊑ composed", bwd);
            verdict("gamma-noncompose", !iso && fwd && bwd, &body)
        }
    };
    out.write(&text)?;
    Ok(code)
}
