use decolog::enumerate::Enumerator;
use decolog::logic::{reduce_to_pure, Emptiness, PureReduction};
use decolog::{enumerate_models, FiniteModel, Logic, ModelBounds, Program, Signature};

fn signature(logic: Logic) -> Signature {
    let extra = match logic {
        Logic::States => "value V = N; const z : N;",
        _ => "param P = N;",
    };
    Program::parse(&format!(
        "signature t {{ logic {}; type N; {extra} op s : N -> N; }}",
        logic.name()
    ))
    .unwrap()
    .signature
}

fn agree(logic: Logic, depth: usize, carriers: usize) -> (usize, Vec<String>) {
    agree_with(logic, depth, carriers, logic == Logic::Exc)
}

fn agree_with(logic: Logic, depth: usize, carriers: usize, control: bool) -> (usize, Vec<String>) {
    let sig = signature(logic);
    let models: Vec<FiniteModel> = enumerate_models(&sig, &ModelBounds::up_to(carriers)).unwrap().collect();
    let eqs = Enumerator::new(&sig, logic).with_control(control).equations(depth);
    let mut bad = Vec::new();
    for e in &eqs {
        for m in &models {
            let red = reduce_to_pure(e, logic, &sig, &Emptiness::from_model(m)).unwrap();
            let sem = m.sem_holds(e).unwrap();
            if red.holds_in(m).unwrap() != sem || (red == PureReduction::Inconsistent && sem) {
                bad.push(format!("{e} in {m}: {red:?}"));
            }
        }
    }
    (eqs.len(), bad)
}

#[test]
fn exceptions_decider_matches_oracle() {
    let (n, bad) = agree(Logic::Exc, 3, 3);
    assert!(n > 0);
    assert!(
        bad.is_empty(),
        "{} disagreements, first: {:?}",
        bad.len(),
        &bad[..bad.len().min(5)]
    );
}

#[test]
fn core_decider_matches_oracle() {
    let (n, bad) = agree(Logic::ExCore, 3, 3);
    assert!(n > 0);
    assert!(
        bad.is_empty(),
        "{} disagreements, first: {:?}",
        bad.len(),
        &bad[..bad.len().min(5)]
    );
}

#[test]
fn states_decider_matches_oracle() {
    let (n, bad) = agree(Logic::States, 3, 3);
    assert!(n > 0);
    assert!(
        bad.is_empty(),
        "{} disagreements, first: {:?}",
        bad.len(),
        &bad[..bad.len().min(5)]
    );
}

#[test]
fn core_decider_with_control_matches_oracle() {
    let (n, bad) = agree_with(Logic::ExCore, 3, 3, true);
    assert!(n > 0);
    assert!(
        bad.is_empty(),
        "{} disagreements, first: {:?}",
        bad.len(),
        &bad[..bad.len().min(5)]
    );
}
