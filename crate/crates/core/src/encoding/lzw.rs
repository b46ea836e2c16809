use std::collections::HashMap;

use crate::error::{Error, Result};

/// Ordered symbol set. The symbol at position `i` owns index `i + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<char>,
}

impl Alphabet {
    pub fn new(symbols: impl IntoIterator<Item = char>) -> Result<Alphabet> {
        let symbols: Vec<char> = symbols.into_iter().collect();
        if symbols.is_empty() {
            return Err(Error::InvalidAlphabet("alphabet is empty"));
        }
        for (i, c) in symbols.iter().enumerate() {
            if symbols[..i].contains(c) {
                return Err(Error::InvalidAlphabet(
                    "alphabet contains a repeated symbol",
                ));
            }
        }
        Ok(Alphabet { symbols })
    }

    /// `a..z` followed by space, indexed 1..=27.
    pub fn normalized() -> Alphabet {
        Alphabet {
            symbols: ('a'..='z').chain(std::iter::once(' ')).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    /// 1-based index of `c`.
    pub fn index_of(&self, c: char) -> Option<u32> {
        self.symbols
            .iter()
            .position(|&s| s == c)
            .map(|i| i as u32 + 1)
    }
}

/// Substring dictionary grown during one LZW run.
///
/// Stored as a trie keyed by `(prefix index, next symbol)`; index `i`
/// always denotes `strings()[i - 1]`.
#[derive(Clone, Debug)]
pub struct LzwDictionary {
    children: HashMap<(u32, char), u32>,
    roots: HashMap<char, u32>,
    strings: Vec<String>,
}

impl LzwDictionary {
    /// Seeds every alphabet symbol with indices `1..=|alphabet|`.
    pub fn seeded(alphabet: &Alphabet) -> LzwDictionary {
        let roots = alphabet
            .symbols()
            .iter()
            .enumerate()
            .map(|(i, &c)| (c, i as u32 + 1))
            .collect();
        let strings = alphabet.symbols().iter().map(|c| c.to_string()).collect();
        LzwDictionary {
            children: HashMap::new(),
            roots,
            strings,
        }
    }

    pub fn len(&self) -> usize {
        self.strings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strings.is_empty()
    }

    /// Index the next inserted entry will receive.
    pub fn next_index(&self) -> u32 {
        self.strings.len() as u32 + 1
    }

    pub fn get(&self, s: &str) -> Option<u32> {
        let mut chars = s.chars();
        let mut index = *self.roots.get(&chars.next()?)?;
        for c in chars {
            index = *self.children.get(&(index, c))?;
        }
        Some(index)
    }

    pub fn string_of(&self, index: u32) -> Option<&str> {
        let i = usize::try_from(index).ok()?.checked_sub(1)?;
        self.strings.get(i).map(String::as_str)
    }

    /// Entries in index order, starting at 1.
    pub fn strings(&self) -> &[String] {
        &self.strings
    }

    fn child(&self, prefix: u32, c: char) -> Option<u32> {
        self.children.get(&(prefix, c)).copied()
    }

    fn insert(&mut self, prefix: u32, c: char) -> u32 {
        let index = self.next_index();
        let mut s = self.strings[prefix as usize - 1].clone();
        s.push(c);
        self.strings.push(s);
        self.children.insert((prefix, c), index);
        index
    }
}

/// LZW-encodes `text` over `alphabet`, returning the emitted indices and the
/// final dictionary.
///
/// The scan extends the current match while it stays in the dictionary; on
/// the first miss it emits the match's index, learns `match + symbol`, and
/// restarts from that symbol. The final match is always emitted.
pub fn encode_lzw(text: &str, alphabet: &Alphabet) -> Result<(Vec<u32>, LzwDictionary)> {
    let mut dict = LzwDictionary::seeded(alphabet);
    let mut out = Vec::new();
    let mut current: Option<u32> = None;
    for (position, c) in text.chars().enumerate() {
        let single = alphabet.index_of(c).ok_or(Error::InvalidSymbol {
            symbol: c,
            position,
        })?;
        current = Some(match current {
            None => single,
            Some(prefix) => match dict.child(prefix, c) {
                Some(extended) => extended,
                None => {
                    out.push(prefix);
                    dict.insert(prefix, c);
                    single
                }
            },
        });
    }
    out.extend(current);
    Ok((out, dict))
}

/// Inverts [`encode_lzw`], including the case where an index refers to the
/// entry being defined by that very step.
pub fn decode_lzw(indices: &[u32], alphabet: &Alphabet) -> Result<String> {
    let mut dict = LzwDictionary::seeded(alphabet);
    let mut out = String::new();
    let mut previous: Option<u32> = None;
    for (position, &index) in indices.iter().enumerate() {
        if index == 0 {
            return Err(Error::ZeroIndex { position });
        }
        let entry = match (dict.string_of(index), previous) {
            (Some(s), _) => s.to_owned(),
            (None, Some(prev)) if index == dict.next_index() => {
                let mut s = dict
                    .string_of(prev)
                    .expect("previous index is defined")
                    .to_owned();
                let first = s.chars().next().expect("entries are nonempty");
                s.push(first);
                s
            }
            _ => return Err(Error::CorruptStream { index, position }),
        };
        if let Some(prev) = previous {
            let first = entry.chars().next().expect("entries are nonempty");
            dict.insert(prev, first);
        }
        out.push_str(&entry);
        previous = Some(index);
    }
    Ok(out)
}
