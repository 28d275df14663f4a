//! Coalitions as bitmasks over the player set.
//!
//! Player `i` (0-based) is bit `i`. Text renderings use 1-based labels, so
//! the coalition holding players 0 and 2 prints as `{1,3}`.

use std::fmt;
use std::str::FromStr;

/// Largest supported player count; dense tables hold `2^MAX_PLAYERS` entries.
pub const MAX_PLAYERS: usize = 20;

/// A subset of the player set, encoded as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Coalition(u32);

impl Coalition {
    pub const EMPTY: Coalition = Coalition(0);

    pub const fn from_mask(mask: u32) -> Self {
        Coalition(mask)
    }

    /// The grand coalition of `players` players.
    pub const fn grand(players: usize) -> Self {
        Coalition(((1u64 << players) - 1) as u32)
    }

    /// Builds a coalition from 0-based player indices.
    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        Coalition(indices.into_iter().fold(0u32, |m, i| m | (1 << i)))
    }

    /// Builds a coalition from 1-based labels, as written in game files.
    ///
    /// Panics on a zero label.
    pub fn from_labels<I: IntoIterator<Item = usize>>(labels: I) -> Self {
        Self::from_indices(labels.into_iter().map(|l| {
            assert!(l >= 1, "player labels start at 1");
            l - 1
        }))
    }

    pub const fn mask(self) -> u32 {
        self.0
    }

    pub const fn index(self) -> usize {
        self.0 as usize
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub const fn contains(self, player: usize) -> bool {
        self.0 >> player & 1 == 1
    }

    pub const fn with(self, player: usize) -> Self {
        Coalition(self.0 | (1 << player))
    }

    pub const fn without(self, player: usize) -> Self {
        Coalition(self.0 & !(1 << player))
    }

    /// The neighbor across the direction-`player` edge.
    pub const fn toggle(self, player: usize) -> Self {
        Coalition(self.0 ^ (1 << player))
    }

    pub const fn union(self, other: Coalition) -> Self {
        Coalition(self.0 | other.0)
    }

    pub const fn is_subset_of(self, other: Coalition) -> bool {
        self.0 & !other.0 == 0
    }

    /// True when every member is below `players`.
    pub const fn fits(self, players: usize) -> bool {
        (self.0 as u64) >> players == 0
    }

    /// Highest member index plus one, or 0 for the empty coalition.
    pub const fn span(self) -> usize {
        32 - self.0.leading_zeros() as usize
    }

    /// 0-based member indices in increasing order.
    pub fn members(self) -> Members {
        Members(self.0)
    }

    /// The image of this coalition when players `i` and `j` exchange roles.
    pub const fn swap(self, i: usize, j: usize) -> Self {
        let (a, b) = (self.contains(i), self.contains(j));
        if a == b {
            self
        } else {
            self.toggle(i).toggle(j)
        }
    }

    /// Removes the `player` bit and shifts higher bits down, relabeling
    /// `[N] \ {player}` onto `[N-1]` in order.
    pub const fn compress(self, player: usize) -> Self {
        let low = (1u32 << player) - 1;
        Coalition((self.0 & low) | ((self.0 >> 1) & !low))
    }

    /// Inverse of [`Coalition::compress`]: opens a zero bit at `player`.
    pub const fn expand(self, player: usize) -> Self {
        let low = (1u32 << player) - 1;
        Coalition((self.0 & low) | ((self.0 & !low) << 1))
    }

    /// All `2^players` coalitions in mask order.
    pub fn all(players: usize) -> impl Iterator<Item = Coalition> + Clone {
        (0..1u32 << players).map(Coalition)
    }

    /// All coalitions that do not contain `player`, in mask order.
    pub fn all_without(players: usize, player: usize) -> impl Iterator<Item = Coalition> {
        (0..1u32 << (players - 1)).map(move |m| Coalition(m).expand(player))
    }
}

/// Iterator over the members of a coalition.
#[derive(Debug, Clone)]
pub struct Members(u32);

impl Iterator for Members {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Members {}

impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.members().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        f.write_str("}")
    }
}

/// Failure to read a `{1,3}`-style coalition label.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed coalition key {key:?}: {reason}")]
pub struct ParseCoalitionError {
    pub key: String,
    pub reason: &'static str,
}

impl FromStr for Coalition {
    type Err = ParseCoalitionError;

    /// Parses `{}`, `{2}`, `{1,3}`; whitespace around labels is allowed.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason| ParseCoalitionError {
            key: s.to_string(),
            reason,
        };
        let inner = s
            .trim()
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| err("expected braces"))?;
        if inner.trim().is_empty() {
            return Ok(Coalition::EMPTY);
        }
        let mut mask = 0u32;
        for part in inner.split(',') {
            let part = part.trim();
            if part.is_empty() {
                return Err(err("empty player label"));
            }
            let label: usize = part.parse().map_err(|_| err("player label is not a positive integer"))?;
            if label == 0 {
                return Err(err("player labels start at 1"));
            }
            if label > MAX_PLAYERS {
                return Err(err("player label exceeds the supported maximum"));
            }
            let bit = 1u32 << (label - 1);
            if mask & bit != 0 {
                return Err(err("duplicate player label"));
            }
            mask |= bit;
        }
        Ok(Coalition(mask))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn swap_follows_case_table() {
        let two = Coalition::from_labels([2]);
        assert_eq!(two.swap(0, 1), Coalition::from_labels([1]));
        let both = Coalition::from_labels([1, 2]);
        assert_eq!(both.swap(0, 1), both);
        assert_eq!(Coalition::EMPTY.swap(0, 2), Coalition::EMPTY);
        assert_eq!(two.swap(1, 1), two);
    }

    #[test]
    fn compress_expand_roundtrip() {
        for m in 0..64u32 {
            let c = Coalition(m);
            for p in 0..6 {
                if !c.contains(p) {
                    assert_eq!(c.compress(p).expand(p), c);
                }
            }
        }
        assert_eq!(Coalition::from_labels([1, 3]).compress(1), Coalition::from_labels([1, 2]));
    }

    #[test]
    fn display_and_parse() {
        let c = Coalition::from_labels([1, 3]);
        assert_eq!(c.to_string(), "{1,3}");
        assert_eq!("{1,3}".parse::<Coalition>().unwrap(), c);
        assert_eq!("{ 3 , 1 }".parse::<Coalition>().unwrap(), c);
        assert_eq!("{}".parse::<Coalition>().unwrap(), Coalition::EMPTY);
        assert_eq!(Coalition::EMPTY.to_string(), "{}");
        for bad in ["{1,,2}", "1,2", "{0}", "{1,1}", "{a}", "{-1}", "{21}"] {
            assert!(bad.parse::<Coalition>().is_err(), "{bad}");
        }
    }

    #[test]
    fn all_without_skips_player() {
        let v: Vec<_> = Coalition::all_without(3, 1).collect();
        assert_eq!(v.len(), 4);
        assert!(v.iter().all(|c| !c.contains(1)));
    }

    #[test]
    fn members_in_order() {
        let c = Coalition::from_indices([4, 0, 2]);
        assert_eq!(c.members().collect::<Vec<_>>(), vec![0, 2, 4]);
        assert_eq!(c.len(), 3);
        assert_eq!(c.span(), 5);
        assert!(c.fits(5) && !c.fits(4));
        assert_eq!(Coalition::grand(3).mask(), 0b111);
    }
}
