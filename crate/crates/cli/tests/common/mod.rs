//! The golden corpus: one invocation per file in `tests/golden`.
#![allow(dead_code)]

use std::path::PathBuf;

use sigma_cli::{run, Outcome};

pub struct Case {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub code: i32,
}

macro_rules! case {
    ($name:literal, $code:literal, [$($arg:literal),* $(,)?]) => {
        Case { name: $name, args: &[$($arg),*], code: $code }
    };
}

pub const CORPUS: &[Case] = &[
    case!("track_bs", 0, ["track", "tests/data/bs12.grp", "--char", "t=-1", "--word", "t^-1 a t"]),
    case!(
        "track_z2_text",
        0,
        ["--format", "text", "track", "tests/data/z2.grp", "--char", "a=1 b=-1", "--word", "b a a^-1 b^-1"]
    ),
    case!("levels_z2", 0, ["levels", "tests/data/z2.grp", "--char", "a=1 b=0", "--m", "2"]),
    case!("levels_bs", 0, ["levels", "tests/data/bs12.grp", "--char", "t=-1", "--m", "3"]),
    case!("gen_along_bs", 0, ["gen-along", "tests/data/bs12.grp", "--char", "t=-1", "--word", "t^-1 a t"]),
    case!("gen_along_negative", 1, ["gen-along", "tests/data/z2.grp", "--char", "a=1 b=0", "--word", "a^-1"]),
    case!("sigma1_z2", 0, ["sigma1", "tests/data/z2.grp", "--char", "a=1 b=0"]),
    case!("sigma1_z2_search", 0, ["sigma1", "tests/data/z2.grp", "--char", "a=-1/2 b=3", "--no-oracles"]),
    case!("sigma1_z2_zero", 0, ["sigma1", "tests/data/z2.grp"]),
    case!("sigma1_z2_rewrite", 0, ["sigma1", "tests/data/z2_rewrite.grp", "--char", "a=0 b=1", "--no-oracles"]),
    case!("sigma1_f2", 1, ["sigma1", "tests/data/f2.grp", "--char", "a=1 b=0"]),
    case!("sigma1_f2z", 0, ["sigma1", "tests/data/f2z.grp", "--char", "a=1 b=1 t=1"]),
    case!("sigma1_bs_member", 0, ["sigma1", "tests/data/bs12.grp", "--char", "t=-1"]),
    case!("sigma1_bs_unknown", 2, ["sigma1", "tests/data/bs12.grp", "--char", "t=1", "--max-word-len", "6"]),
    case!(
        "sigma1_cone_z2",
        0,
        ["sigma1-cone", "tests/data/z2.grp", "--char", "a=1 b=0", "--samples", "10", "--seed", "3"]
    ),
    case!("sigma1_cone_bs", 0, ["sigma1-cone", "tests/data/bs12.grp", "--char", "t=-1", "--samples", "5"]),
    case!("sigma2_z2", 0, ["--radius", "3", "sigma2", "tests/data/z2.grp", "--char", "a=1 b=0", "--max-len", "6"]),
    case!("sigma2_f2_vacuous", 1, ["sigma2", "tests/data/f2.grp", "--char", "a=1 b=0", "--max-len", "4"]),
    case!("triangulate_z2", 0, ["triangulate", "tests/data/z2.grp", "--char", "a=1 b=0", "--m", "2"]),
    case!("triangulate_bs", 0, ["triangulate", "tests/data/bs12.grp", "--char", "t=-1", "--m", "2"]),
    case!("cayley_z2", 0, ["--radius", "2", "cayley-window", "tests/data/z2.grp", "--char", "a=1 b=0", "--level", "0"]),
    case!(
        "cayley_z2_dot",
        0,
        [
            "--format",
            "dot",
            "--radius",
            "2",
            "cayley-window",
            "tests/data/z2.grp",
            "--char",
            "a=1 b=0",
            "--level",
            "0",
            "--cells"
        ]
    ),
    case!(
        "cayley_bs_text",
        0,
        ["--format", "text", "--radius", "2", "cayley-window", "tests/data/bs12.grp", "--char", "t=-1"]
    ),
    case!(
        "filtration_z",
        0,
        ["--radius", "4", "filtration-probe", "tests/data/z.grp", "--char", "a=1", "--m-max", "1"]
    ),
    case!(
        "filtration_f2",
        0,
        [
            "--radius",
            "3",
            "filtration-probe",
            "tests/data/f2.grp",
            "--char",
            "a=1",
            "--m-max",
            "2",
            "--s-grid",
            "0,-1",
            "--translates",
            "nonneg"
        ]
    ),
    case!(
        "verify_cert_inside",
        0,
        ["verify-cert", "tests/data/z2_cert.json", "tests/data/z2.grp", "--char", "a=1 b=1"]
    ),
    case!(
        "verify_cert_outside",
        1,
        ["verify-cert", "tests/data/z2_cert.json", "tests/data/z2.grp", "--char", "a=-1 b=0"]
    ),
    case!(
        "verify_cert_wrong_group",
        3,
        ["verify-cert", "tests/data/z2_cert.json", "tests/data/f2.grp", "--char", "a=1 b=0"]
    ),
    case!("geom_instance", 0, ["geom-check", "--instance", "P=-2,0 T=-1,0 r=1 h=1 nu=1/2"]),
    case!("geom_hypothesis", 1, ["geom-check", "--instance", "P=-2,0 T=-2,0 r=1 h=1 nu=1/2"]),
    case!("geom_samples", 0, ["--seed", "11", "geom-check", "--samples", "300"]),
    case!("error_parse", 3, ["sigma1", "tests/data/bad_exponent.grp"]),
    case!("error_character", 1, ["sigma1", "tests/data/bs12.grp", "--char", "a=1"]),
    case!("error_unknown_name", 3, ["track", "tests/data/z2.grp", "--char", "c=1", "--word", "a"]),
    case!("error_missing_file", 3, ["levels", "tests/data/missing.grp", "--m", "1"]),
    case!("error_dot_unsupported", 3, ["--format", "dot", "sigma1", "tests/data/z2.grp"]),
];

pub fn invoke(case: &Case, threads: Option<u16>) -> Outcome {
    let mut args: Vec<String> = vec!["sigma".into(), "--no-timing".into()];
    if let Some(n) = threads {
        args.push("--threads".into());
        args.push(n.to_string());
    }
    args.extend(case.args.iter().map(|a| a.to_string()));
    run(args)
}

pub fn render(o: &Outcome) -> String {
    format!("exit: {}\n--- stdout\n{}--- stderr\n{}", o.code, o.stdout, o.stderr)
}

pub fn golden_path(name: &str) -> PathBuf {
    PathBuf::from("tests/golden").join(format!("{name}.out"))
}
