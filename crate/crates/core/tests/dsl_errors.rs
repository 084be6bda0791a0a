use cdc_core::dsl::parse;
use cdc_core::{Error, Pos};

#[test]
fn syntax_errors_report_documented_positions() {
    let text = include_str!("fixtures/syntax_errors.txt");
    let mut seen = 0;
    for row in text.lines().filter(|l| !l.starts_with('#') && !l.is_empty()) {
        let cols: Vec<&str> = row.split('|').collect();
        let input = cols[0].replace("\\n", "\n");
        let (line, column) = cols[1].split_once(':').unwrap();
        let want = Pos {
            line: line.parse().unwrap(),
            column: column.parse().unwrap(),
        };
        match parse(&input) {
            Err(Error::Syntax { pos, expected, .. }) => {
                assert_eq!(pos, want, "{input:?}");
                assert_eq!(expected, cols[2], "{input:?}");
            }
            other => panic!("{input:?}: expected a syntax error, got {other:?}"),
        }
        seen += 1;
    }
    assert_eq!(seen, 15);
}

#[test]
fn messages_lead_with_the_position() {
    let err = parse("x0 +\n  * x1").unwrap_err().to_string();
    assert_eq!(
        err,
        "line 2, column 3: syntax error: expected a variable, a number, `(`, `<` or a function, found `*`"
    );
}
