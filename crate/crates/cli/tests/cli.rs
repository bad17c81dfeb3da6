use std::process::Command;

use proptest::prelude::*;
use weyl_cli::wire::{
    certificate_from_json, certificate_to_json, element_from_json, element_to_json, word_from_json, word_to_json,
};
use weyl_cli::{format_element, parse_expression, run};
use weyl_core::{AutoWord, CertSide, Certificate, Generator, Monomial, Poly, Rational, Side, WeylElement};

fn weyl(args: &[&str]) -> weyl_cli::Outcome {
    run(std::iter::once("weyl").chain(args.iter().copied()))
}

fn write_temp(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    std::io::Write::write_all(&mut f, contents.as_bytes()).unwrap();
    f
}

#[test]
fn decide_airy_prints_certificate() {
    let out = weyl(&["decide", "D^2 - x"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.starts_with("verdict: StrictlyNilpotent\n"), "{}", out.stdout);
    assert!(out.stdout.contains("\"kind\":\"fourier\""), "{}", out.stdout);
    assert!(out.stdout.contains("Q(D) = D"), "{}", out.stdout);
}

#[test]
fn decide_rejection_exits_zero() {
    let out = weyl(&["decide", "x*D"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("verdict: NotStrictlyNilpotent"));
    assert!(out.stdout.contains("reason: NonconstantLeading"));

    let out = weyl(&["decide", "--json", "D^3 + x*D"]);
    let doc: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(doc["verdict"], "NotStrictlyNilpotent");
    assert_eq!(doc["reason"], "PositiveYMultiplicity");
    assert_eq!(doc["stage"], 1);
}

#[test]
fn decide_json_reverifies() {
    for expr in ["D^2 - x", "(D - x^2)^2", "x^3 + x", "D^4", "(D^2 + x)^2 + 3*(D^2 + x)"] {
        let out = weyl(&["decide", "--json", expr]);
        assert_eq!(out.code, 0, "{expr}: {}", out.stderr);
        let doc: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(doc["verdict"], "StrictlyNilpotent", "{expr}");
        assert_eq!(element_from_json(&doc["input"]).unwrap(), parse_expression(expr).unwrap());
        let file = write_temp(&out.stdout);
        let check = weyl(&["verify", "--cert", file.path().to_str().unwrap(), expr]);
        assert_eq!(check.stdout, "certificate verified\n", "{expr}");
    }
}

#[test]
fn verify_rejects_wrong_operator() {
    let out = weyl(&["decide", "--json", "D^2 - x"]);
    let file = write_temp(&out.stdout);
    let check = weyl(&["verify", "--cert", file.path().to_str().unwrap(), "D^2 + x"]);
    assert_eq!((check.code, check.stdout.as_str()), (0, "certificate REJECTED\n"));
}

#[test]
fn ad_subcommand() {
    assert_eq!(weyl(&["ad", "D^2 - x", "x"]).stdout, "NilpotentAt 3\n");
    assert_eq!(weyl(&["ad", "x*D", "x"]).stdout, "EigenObstruction 1\n");
    let out = weyl(&["ad", "D^2 + x^2", "x", "--max-steps", "5"]);
    assert!(out.stdout.starts_with("BoundExhausted after 5 steps"), "{}", out.stdout);
}

#[test]
fn partner_subcommand() {
    let out = weyl(&["partner", "D^2 - x"]);
    assert_eq!(out.stdout, "Lambda = Dz^2 - z\nf(z) = z\ntheta(x) = x\n");
    let out = weyl(&["partner", "(D - x^2)^2"]);
    assert_eq!(out.stdout, "Lambda = Dz\nf(z) = z^2\ntheta(x) = x\n");
    let out = weyl(&["partner", "x*D"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("not certified"));
}

#[test]
fn ccr_subcommand() {
    assert_eq!(weyl(&["ccr", "D", "x"]).stdout, "[L, P] = 1: true\n");
    assert_eq!(weyl(&["ccr", "D^2", "x"]).stdout, "[L, P] = 1: false\n");
    let out = weyl(&["ccr", "D", "x", "--generators"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("a = 1\nb = 0\nR(D) = 0\nword = []"), "{}", out.stdout);
    let out = weyl(&["ccr", "D - x^2", "x", "--generators"]);
    assert!(out.stdout.contains("\"kind\":\"shiftD\""), "{}", out.stdout);
    assert_eq!(weyl(&["ccr", "D^2", "x", "--generators"]).code, 1);
}

#[test]
fn polygon_subcommand() {
    let out = weyl(&["polygon", "D^4 + 2*x*D^2 + 2*D + x^2"]);
    assert_eq!(
        out.stdout,
        "order: 4\nweight: (2, 1)\nanchor: (2, 0)\nv: 4\nf: Y^4 + 2*X*Y^2 + X^2\n\
         factors: (Y^2 + X)^2 (n = 0, r = 2, k = 2, lambda = -1)\n"
    );
    let out = weyl(&["polygon", "D^2 + x^2"]);
    assert!(out.stdout.contains("not of the form"), "{}", out.stdout);
    assert!(out.stdout.contains("strictly semisimple"), "{}", out.stdout);
}

#[test]
fn apply_subcommand() {
    let word = write_temp(r#"[{"kind": "fourier", "poly": []}, {"kind": "shiftX", "poly": ["0", "0", "0", "-1/3"]}]"#);
    let out = weyl(&["apply", "--word", word.path().to_str().unwrap(), "D"]);
    assert_eq!(out.stdout, "D^2 - x\n");
    let bad = write_temp(r#"[{"kind": "shiftX", "poly": ["1"]}]"#);
    assert_eq!(weyl(&["apply", "--word", bad.path().to_str().unwrap(), "D"]).code, 1);
    assert_eq!(weyl(&["apply", "--word", "/nonexistent/word.json", "D"]).code, 1);
}

#[test]
fn random_is_seeded() {
    let a = weyl(&["random", "--seed", "11", "--word-len", "3", "--max-deg", "4", "--max-order", "12"]);
    let b = weyl(&["random", "--seed", "11", "--word-len", "3", "--max-deg", "4", "--max-order", "12"]);
    assert_eq!(a.code, 0, "{}", a.stderr);
    assert_eq!(a, b);
    let doc: serde_json::Value = serde_json::from_str(&a.stdout).unwrap();
    let l = parse_expression(doc["element"].as_str().unwrap()).unwrap();
    let cert = certificate_from_json(&doc["certificate"]).unwrap();
    assert!(weyl_core::verify_certificate(&l, &cert));
    assert_eq!(weyl(&["random", "--seed", "1", "--max-deg", "2"]).code, 1);
}

#[test]
fn usage_and_parse_errors_exit_one() {
    assert_eq!(weyl(&["frobnicate"]).code, 1);
    assert_eq!(weyl(&["decide"]).code, 1);
    let out = weyl(&["decide", "2x"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("byte 1"), "{}", out.stderr);
    let help = weyl(&["--help"]);
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("decide"));
}

#[test]
fn leading_minus_is_an_expression() {
    let out = weyl(&["decide", "-D^2 + x"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("StrictlyNilpotent"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_weyl");
    let ok = Command::new(bin).args(["decide", "x*D"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("NonconstantLeading"));
    let bad = Command::new(bin).args(["decide", "x +"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).starts_with("error: parse error"));
}

fn rational() -> impl Strategy<Value = Rational> {
    (-50i64..=50, 1i64..=20).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn element() -> impl Strategy<Value = WeylElement> {
    (any::<bool>(), prop::collection::vec(((0u32..=5, 0u32..=5), rational()), 0..8)).prop_map(|(z, terms)| {
        let side = if z { Side::Z } else { Side::X };
        WeylElement::from_terms(side, terms.into_iter().map(|((i, j), c)| (Monomial::new(i, j), c)))
    })
}

fn poly(min_len: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(rational(), min_len..5).prop_map(Poly::from_coeffs)
}

fn word() -> impl Strategy<Value = AutoWord> {
    let gen = prop_oneof![
        Just(Generator::Fourier),
        poly(0).prop_map(Generator::shift_x),
        poly(0).prop_map(Generator::shift_d),
    ];
    prop::collection::vec(gen, 0..5).prop_map(AutoWord::new)
}

proptest! {
    #[test]
    fn format_then_parse_is_identity(e in element()) {
        let parsed = parse_expression(&format_element(&e)).unwrap();
        // Constants carry no side marker in text and parse on the x side.
        if e.is_constant() {
            prop_assert_eq!(parsed.with_side(e.side()), e);
        } else {
            prop_assert_eq!(parsed, e);
        }
    }

    #[test]
    fn element_json_round_trip(e in element()) {
        let v = element_to_json(&e);
        let text = serde_json::to_string(&v).unwrap();
        prop_assert_eq!(element_from_json(&serde_json::from_str(&text).unwrap()).unwrap(), e);
    }

    #[test]
    fn word_json_round_trip(w in word()) {
        prop_assert_eq!(word_from_json(&word_to_json(&w)).unwrap(), w);
    }

    #[test]
    fn certificate_json_round_trip(w in word(), q in poly(2), x_side in any::<bool>()) {
        let side = if x_side { CertSide::X } else { CertSide::D };
        let c = Certificate { word: w, gen_poly: q, side };
        prop_assert_eq!(certificate_from_json(&certificate_to_json(&c)).unwrap(), c);
    }

    #[test]
    fn element_terms_are_sorted(e in element()) {
        let v = element_to_json(&e);
        let keys: Vec<(u64, u64)> = v["terms"].as_array().unwrap().iter()
            .map(|t| (t["xexp"].as_u64().unwrap(), t["dexp"].as_u64().unwrap()))
            .collect();
        prop_assert!(keys.windows(2).all(|w| w[0] < w[1]));
    }
}
