use std::fmt::Write;

use super::{Circuit, CircuitError, Gate, VarLabel};

pub(super) fn parse(text: &str) -> Result<Circuit, CircuitError> {
    let mut gates = Vec::new();
    let mut output = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let err = |msg: String| CircuitError::Parse { line, msg };
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let toks: Vec<&str> = body.split_whitespace().collect();
        match toks[0] {
            "gate" => {
                if toks.len() < 3 {
                    return Err(err("expected `gate <id> <kind> ...`".into()));
                }
                let id: usize = toks[1].parse().map_err(|_| err(format!("bad gate id {:?}", toks[1])))?;
                if id != gates.len() {
                    return Err(err(format!("gate ids must be dense and ordered; expected {}", gates.len())));
                }
                let args = &toks[3..];
                let ids = || -> Result<Vec<usize>, CircuitError> {
                    if args.is_empty() {
                        return Err(err("add/mul gate needs at least one child".into()));
                    }
                    args.iter()
                        .map(|a| {
                            let c: usize = a.parse().map_err(|_| err(format!("bad child id {a:?}")))?;
                            if c >= id {
                                return Err(err(format!("child {c} does not precede gate {id}")));
                            }
                            Ok(c)
                        })
                        .collect()
                };
                let gate = match (toks[2], args) {
                    ("const", [v]) => Gate::Const(v.parse().map_err(|_| err(format!("bad constant {v:?}")))?),
                    ("input", [l]) => Gate::Input(l.parse::<VarLabel>().map_err(|e| err(e.to_string()))?),
                    ("add", _) => Gate::Add(ids()?),
                    ("mul", _) => Gate::Mul(ids()?),
                    (kind, _) => return Err(err(format!("bad gate record `{kind}` with {} arguments", args.len()))),
                };
                gates.push(gate);
            }
            "output" => {
                let [_, id] = toks.as_slice() else {
                    return Err(err("expected `output <id>`".into()));
                };
                if output.is_some() {
                    return Err(err("duplicate output record".into()));
                }
                output = Some(id.parse::<usize>().map_err(|_| err(format!("bad output id {id:?}")))?);
            }
            other => return Err(err(format!("unknown record {other:?}"))),
        }
    }
    let output = output.ok_or(CircuitError::Parse { line: 0, msg: "missing output record".into() })?;
    Circuit::new(gates, output)
}

pub(super) fn render(c: &Circuit) -> String {
    let mut s = String::new();
    for (id, g) in c.gates().iter().enumerate() {
        let _ = match g {
            Gate::Const(v) => writeln!(s, "gate {id} const {v}"),
            Gate::Input(l) => writeln!(s, "gate {id} input {l}"),
            Gate::Add(cs) | Gate::Mul(cs) => {
                let kind = if matches!(g, Gate::Add(_)) { "add" } else { "mul" };
                let list: Vec<String> = cs.iter().map(|c| c.to_string()).collect();
                writeln!(s, "gate {id} {kind} {}", list.join(" "))
            }
        };
    }
    let _ = writeln!(s, "output {}", c.output());
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let src = "gate 0 input Z:1:2\ngate 1 input Ye:1:2\ngate 2 const 1\ngate 3 mul 0 1 2\ngate 4 add 3 3\noutput 4\n";
        let c = parse(src).unwrap();
        assert_eq!(render(&c), src);
        assert_eq!(parse(&render(&c)).unwrap(), c);
    }

    #[test]
    fn reports_line_numbers() {
        let e = parse("gate 0 input x\ngate 1 mul 0 5\noutput 1\n").unwrap_err();
        assert!(matches!(e, CircuitError::Parse { line: 2, .. }));
        let e = parse("gate 0 input x\n").unwrap_err();
        assert!(matches!(e, CircuitError::Parse { line: 0, .. }));
        let e = parse("gate 1 input x\noutput 1").unwrap_err();
        assert!(matches!(e, CircuitError::Parse { line: 1, .. }));
    }
}
