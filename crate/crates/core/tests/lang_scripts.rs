use std::fs;
use std::path::PathBuf;

use mathpar::lang::{parse_script, LangError, Session};

fn run(script: &str) -> Vec<Result<String, LangError>> {
    Session::new()
        .run(script)
        .into_iter()
        .map(|o| match o.error {
            None => Ok(o.output),
            Some(e) => Err(e),
        })
        .collect()
}

fn last(script: &str) -> String {
    match run(script).pop() {
        Some(Ok(s)) => s,
        other => panic!("`{script}` gave {other:?}"),
    }
}

fn listings() -> Vec<(PathBuf, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../listings");
    let mut v: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "mp"))
        .map(|p| {
            let src = fs::read_to_string(&p).unwrap();
            (p, src)
        })
        .collect();
    v.sort();
    assert!(v.len() >= 25);
    v
}

#[test]
fn small_scripts() {
    assert_eq!(last("SPACE=Q[]; 1+1;"), "2");
    assert_eq!(last("SPACE=Z[x]; \\GCD(9*x, 6*x+6);"), "3");
    assert_eq!(
        last("SPACE=R64[]; FLOATPOS=3; a=\\AGM(1,5); g=\\GHM(1,5); m=\\MAGM(1,5); [a,g,m];"),
        "[2.604, 1.920, 2.611]"
    );
    assert_eq!(last("SPACE=R[]; FLOATPOS=3; \\value(\\pi);"), "3.142");
    assert_eq!(last("SPACE=Q[]; [[1, 2], [3, 1]];"), "[[1, 2], [3, 1]]");
    assert_eq!(last("SPACE=R64[]; FLOATPOS=3; \\ellipticK(0.5);"), "1.686");
    assert_eq!(
        last("SPACE=R64[]; FLOATPOS=3; \\ellipseCircumference(2, 1);"),
        "9.688"
    );
}

#[test]
fn matrix_builtins() {
    let pre = "SPACE=Q[x]; M=[[1, 2], [2, 4]]; A=[[1, 2], [3, 1]];";
    let cases = [
        (
            "\\transpose([[1, 2, 3], [4, 5, 6]])",
            "[[1, 4], [2, 5], [3, 6]]",
        ),
        ("\\rank(M)", "1"),
        ("\\toEchelonForm(M)", "[[1, 2], [0, 0]]"),
        ("\\kernel(M)", "[[-2, 1]^T]"),
        ("\\inverse(A)", "[[-1/5, 2/5], [3/5, -1/5]]"),
        ("\\adjoint(A)", "[[1, -2], [-3, 1]]"),
        ("\\genInverse(M)", "[[1/25, 2/25], [2/25, 4/25]]"),
        ("\\closure([[0, 1], [0, 0]])", "[[1, 1], [0, 1]]"),
        ("\\det(A)", "-5"),
        ("A^-1*A", "[[1, 0], [0, 1]]"),
        ("\\charPolynom(A)", "x^2-2*x-5"),
    ];
    for (expr, want) in cases {
        assert_eq!(last(&format!("{pre} {expr};")), want, "{expr}");
    }
}

#[test]
fn polynomial_builtins() {
    assert_eq!(
        last("SPACE=Q[x]; \\extendedGCD(x^2-1, x-1);"),
        "[x-1, 0, 1]"
    );
    assert_eq!(last("SPACE=Q[x]; \\D(x^3+1/x);"), "(3*x^4-1)/x^2");
    assert_eq!(last("SPACE=Q[x]; \\solve(x^2-2 = 0);"), "[-√2, √2]");
    assert_eq!(last("SPACE=Q[x]; \\solve(x^2 > 1);"), "(-∞, -1) ∪ (1, ∞)");
}

#[test]
fn errors_are_per_statement() {
    let r = run("SPACE=R64[]; \\AGM(1+1, 2); \\AGM(1, -2); 1/0; y; \\nosuch(1); 3;");
    assert!(
        matches!(r[1], Err(LangError::ArgumentForm(_))),
        "{:?}",
        r[1]
    );
    assert!(matches!(r[2], Err(LangError::Means(_))), "{:?}", r[2]);
    assert!(r[3].is_err());
    assert!(matches!(r[4], Err(LangError::UnknownName(_))));
    assert!(matches!(r[5], Err(LangError::UnknownFunction(_))));
    assert_eq!(r[6].as_ref().unwrap(), "3.00");
    assert!(matches!(run("x+1;")[0], Err(LangError::UndeclaredSpace)));
    assert!(matches!(
        run("SPACE=Z[x]; \\GCD(x);")[1],
        Err(LangError::ArityMismatch { .. })
    ));
}

#[test]
fn corpus_statements_print_to_a_parse_fixpoint() {
    for (path, src) in listings() {
        for st in parse_script(&src) {
            let a = st
                .parsed
                .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            let printed = a.to_string();
            let b = parse_script(&printed).pop().unwrap().parsed.unwrap();
            assert_eq!(a, b, "{} printed as {printed}", path.display());
        }
    }
}

#[test]
fn corpus_evaluation_is_deterministic() {
    for (path, src) in listings() {
        let a: Vec<_> = Session::new()
            .run(&src)
            .into_iter()
            .map(|o| (o.output, o.latex))
            .collect();
        let b: Vec<_> = Session::new()
            .run(&src)
            .into_iter()
            .map(|o| (o.output, o.latex))
            .collect();
        assert_eq!(a, b, "{}", path.display());
    }
}
