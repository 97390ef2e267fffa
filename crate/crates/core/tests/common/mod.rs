//! Invocations of the command-line tool with golden outputs in
//! `fixtures/golden/<name>.out` and their expected exit codes.

#[allow(clippy::type_complexity)]
pub const CASES: &[(&str, &[&str], i32)] = &[
    ("check_ex31", &["check", "fixtures/ex31.deco"], 0),
    ("check_ex4_core", &["check", "fixtures/ex4_core.deco"], 0),
    ("dump_ex31", &["check", "--dump-denotation", "fixtures/ex31.deco"], 0),
    ("translate_ex31", &["translate", "--verify", "fixtures/ex31.deco"], 0),
    (
        "witness_exc",
        &[
            "check",
            "--carrier-min",
            "2",
            "--carrier-max",
            "2",
            "fixtures/witness_exc.deco",
        ],
        1,
    ),
    (
        "witness_core",
        &[
            "check",
            "--carrier-min",
            "2",
            "--carrier-max",
            "2",
            "fixtures/witness_core.deco",
        ],
        1,
    ),
    (
        "witness_states",
        &[
            "check",
            "--carrier-min",
            "2",
            "--carrier-max",
            "2",
            "fixtures/witness_states.deco",
        ],
        1,
    ),
    ("check_mixed", &["check", "fixtures/mixed.deco"], 1),
    ("model_check_mixed", &["model-check", "fixtures/mixed.deco"], 1),
    (
        "normalize_exc",
        &["normalize", "try (s . throw[N] . three) catch (p)"],
        0,
    ),
    ("normalize_core", &["normalize", "--logic", "excore", "untag . tag"], 0),
    (
        "normalize_states",
        &["normalize", "--logic", "states", "s . lookup . update . lookup"],
        0,
    ),
    (
        "sweep_excore_2",
        &["sweep", "--logic", "excore", "--depth", "2", "--carrier-max", "2"],
        0,
    ),
    ("audit_exc_2", &["audit", "--logic", "exc", "--depth", "2"], 0),
    ("roundtrip", &["roundtrip", "--count", "200", "--seed", "11"], 0),
];
