use std::fmt;
use std::ops::Mul;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: u32,
    pub inv: bool,
}

impl Letter {
    pub fn new(gen: u32, inv: bool) -> Self {
        Self { gen, inv }
    }

    pub fn inverse(self) -> Self {
        Self { gen: self.gen, inv: !self.inv }
    }
}

/// A freely reduced word in the free group.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreeWord {
    letters: Vec<Letter>,
}

impl FreeWord {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn gen(g: u32) -> Self {
        Self { letters: vec![Letter::new(g, false)] }
    }

    pub fn gen_inv(g: u32) -> Self {
        Self { letters: vec![Letter::new(g, true)] }
    }

    pub fn letter(l: Letter) -> Self {
        Self { letters: vec![l] }
    }

    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut w = Self::identity();
        for l in letters {
            w.push(l);
        }
        w
    }

    /// Signed generators: `3` is g3, `-3` is its inverse. Zero is not allowed.
    pub fn from_signed(gens: &[i64]) -> Self {
        Self::from_letters(gens.iter().map(|&g| {
            assert!(g != 0, "generator 0 has no sign");
            Letter::new(g.unsigned_abs() as u32, g < 0)
        }))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn push(&mut self, l: Letter) {
        if self.letters.last() == Some(&l.inverse()) {
            self.letters.pop();
        } else {
            self.letters.push(l);
        }
    }

    pub fn append(&mut self, other: &FreeWord) {
        for &l in &other.letters {
            self.push(l);
        }
    }

    pub fn inverse(&self) -> Self {
        Self { letters: self.letters.iter().rev().map(|l| l.inverse()).collect() }
    }

    /// `[a, b] = a b̄ ā b`.
    pub fn commutator(a: &FreeWord, b: &FreeWord) -> Self {
        let mut w = a.clone();
        w.append(&b.inverse());
        w.append(&a.inverse());
        w.append(b);
        w
    }

    /// `w̄ x w`.
    pub fn conjugate_by(&self, w: &FreeWord) -> Self {
        let mut out = w.inverse();
        out.append(self);
        out.append(w);
        out
    }

    pub fn exponent_sum(&self, g: u32) -> i64 {
        self.letters
            .iter()
            .filter(|l| l.gen == g)
            .map(|l| if l.inv { -1 } else { 1 })
            .sum()
    }

    pub fn total_exponent(&self) -> i64 {
        self.letters.iter().map(|l| if l.inv { -1 } else { 1 }).sum()
    }

    pub fn generators(&self) -> impl Iterator<Item = u32> + '_ {
        self.letters.iter().map(|l| l.gen)
    }

    /// Replaces each generator by a word.
    pub fn substitute(&self, f: impl Fn(u32) -> FreeWord) -> FreeWord {
        let mut out = FreeWord::identity();
        for l in &self.letters {
            let w = f(l.gen);
            if l.inv {
                out.append(&w.inverse());
            } else {
                out.append(&w);
            }
        }
        out
    }

    /// Renders with generator names supplied by `name`.
    pub fn display_with<'a>(&'a self, name: impl Fn(u32) -> String + 'a) -> impl fmt::Display + 'a {
        DisplayWith { w: self, name }
    }
}

struct DisplayWith<'a, F> {
    w: &'a FreeWord,
    name: F,
}

impl<F: Fn(u32) -> String> fmt::Display for DisplayWith<'_, F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.w.is_empty() {
            return f.write_str("1");
        }
        for (i, l) in self.w.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(&(self.name)(l.gen))?;
            if l.inv {
                f.write_str("^-1")?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(|g| format!("x{g}")))
    }
}

impl Mul for &FreeWord {
    type Output = FreeWord;

    fn mul(self, rhs: &FreeWord) -> FreeWord {
        let mut w = self.clone();
        w.append(rhs);
        w
    }
}

impl Mul for FreeWord {
    type Output = FreeWord;

    fn mul(mut self, rhs: FreeWord) -> FreeWord {
        self.append(&rhs);
        self
    }
}
