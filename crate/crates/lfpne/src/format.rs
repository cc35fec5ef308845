//! Plain-text game files. The canonical form is
//!
//! ```text
//! n 3
//! actions 2 2 2
//! payoffs 1
//! 1 1 0 0 ...
//! payoffs 2
//! ...
//! ```
//!
//! with one flat payoff line per player in profile order (first player
//! slowest, leader fastest). Values use the shortest round-trip decimal
//! form, so write -> read -> write reproduces identical bytes. Readers also
//! accept blank lines and `#` comments, which the writer never emits.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use thiserror::Error;

use crate::game::NormalFormGame;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unexpected end of file: {0}")]
    UnexpectedEof(String),
    #[error(transparent)]
    Game(#[from] crate::game::GameError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

pub fn write_game(game: &NormalFormGame, w: &mut impl Write) -> io::Result<()> {
    writeln!(w, "n {}", game.num_players())?;
    write!(w, "actions")?;
    for m in game.actions() {
        write!(w, " {}", m)?;
    }
    writeln!(w)?;
    for p in 0..game.num_players() {
        writeln!(w, "payoffs {}", p + 1)?;
        let tensor = game.payoff_tensor(p);
        for (i, v) in tensor.iter().enumerate() {
            if i > 0 {
                write!(w, " ")?;
            }
            write!(w, "{}", v)?;
        }
        writeln!(w)?;
    }
    Ok(())
}

pub fn game_to_string(game: &NormalFormGame) -> String {
    let mut buf = Vec::new();
    write_game(game, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("game text is ASCII")
}

pub fn save_game(game: &NormalFormGame, path: impl AsRef<Path>) -> Result<(), FormatError> {
    Ok(fs::write(path, game_to_string(game))?)
}

pub fn load_game(path: impl AsRef<Path>) -> Result<NormalFormGame, FormatError> {
    parse_game(&fs::read_to_string(path)?)
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn next_content(&mut self) -> Option<(usize, &'a str)> {
        for (idx, raw) in self.inner.by_ref() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if !line.is_empty() {
                return Some((idx + 1, line));
            }
        }
        None
    }
}

pub fn parse_game(text: &str) -> Result<NormalFormGame, FormatError> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
    };

    let (lineno, line) = lines
        .next_content()
        .ok_or_else(|| FormatError::UnexpectedEof("expected `n <players>`".into()))?;
    let n: usize = match line.strip_prefix("n ") {
        Some(rest) => rest.trim().parse().map_err(|_| FormatError::Parse {
            line: lineno,
            msg: format!("bad player count {:?}", rest.trim()),
        })?,
        None => {
            return Err(FormatError::Parse {
                line: lineno,
                msg: format!("expected `n <players>`, got {line:?}"),
            })
        }
    };

    let (lineno, line) = lines
        .next_content()
        .ok_or_else(|| FormatError::UnexpectedEof("expected `actions ...`".into()))?;
    let rest = line.strip_prefix("actions").ok_or_else(|| FormatError::Parse {
        line: lineno,
        msg: format!("expected `actions ...`, got {line:?}"),
    })?;
    let actions: Vec<usize> = rest
        .split_whitespace()
        .map(|tok| {
            tok.parse().map_err(|_| FormatError::Parse {
                line: lineno,
                msg: format!("bad action count {tok:?}"),
            })
        })
        .collect::<Result<_, _>>()?;
    if actions.len() != n {
        return Err(FormatError::Parse {
            line: lineno,
            msg: format!("{} action counts for {} players", actions.len(), n),
        });
    }

    let total: usize = actions.iter().product();
    let mut tensors = Vec::with_capacity(n);
    for p in 0..n {
        let (lineno, line) = lines
            .next_content()
            .ok_or_else(|| FormatError::UnexpectedEof(format!("expected `payoffs {}`", p + 1)))?;
        let expected = format!("payoffs {}", p + 1);
        if line != expected {
            return Err(FormatError::Parse {
                line: lineno,
                msg: format!("expected {expected:?}, got {line:?}"),
            });
        }
        let (lineno, line) = lines
            .next_content()
            .ok_or_else(|| FormatError::UnexpectedEof(format!("payoff values for player {}", p + 1)))?;
        let values: Vec<f64> = line
            .split_whitespace()
            .map(|tok| {
                tok.parse().map_err(|_| FormatError::Parse {
                    line: lineno,
                    msg: format!("bad payoff {tok:?}"),
                })
            })
            .collect::<Result<_, _>>()?;
        if values.len() != total {
            return Err(FormatError::Parse {
                line: lineno,
                msg: format!(
                    "player {} has {} payoffs, expected {}",
                    p + 1,
                    values.len(),
                    total
                ),
            });
        }
        tensors.push(values);
    }
    if let Some((lineno, line)) = lines.next_content() {
        return Err(FormatError::Parse {
            line: lineno,
            msg: format!("trailing content {line:?}"),
        });
    }
    Ok(NormalFormGame::new(actions, tensors)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::{make_paper_example, PaperExample};

    #[test]
    fn round_trip_is_bit_exact() {
        for game in [
            make_paper_example(PaperExample::Nonexistence),
            make_paper_example(PaperExample::ArbitrarilyWorse(10.0)),
            make_paper_example(PaperExample::TwoSatFig5),
            crate::generator::generate_random_game(3, 4, 42),
        ] {
            let first = game_to_string(&game);
            let parsed = parse_game(&first).unwrap();
            assert_eq!(parsed, game);
            let second = game_to_string(&parsed);
            assert_eq!(first.as_bytes(), second.as_bytes());
        }
    }

    #[test]
    fn comments_and_blank_lines_accepted() {
        let text = "# demo\nn 2\n\nactions 2 2  # two each\npayoffs 1\n1 2 3 4\npayoffs 2\n4 3 2 1\n";
        let game = parse_game(text).unwrap();
        assert_eq!(game.payoff(0, &[1, 0]), 3.0);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_game("n 2\nactions 2 2\npayoffs 1\n1 2 3\npayoffs 2\n1 2 3 4\n");
        match err {
            Err(FormatError::Parse { line, msg }) => {
                assert_eq!(line, 4);
                assert!(msg.contains("expected 4"), "{msg}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(parse_game("").is_err());
        assert!(parse_game("n x\n").is_err());
    }

    #[test]
    fn save_and_load() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.game");
        let game = crate::generator::generate_random_game(3, 2, 7);
        save_game(&game, &path).unwrap();
        let loaded = load_game(&path).unwrap();
        assert_eq!(loaded, game);
    }
}
