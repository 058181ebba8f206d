//! Porter stemmer (the original 1980 algorithm).
//!
//! Ported in the style of the reference implementation: a byte buffer `b`
//! and the stem end `j` set by suffix matching (`j == -1` means the suffix
//! was the whole word). Only ASCII words longer than two characters are
//! stemmed; anything else is returned unchanged.

pub fn stem(word: &str) -> String {
    if word.len() <= 2 || !word.is_ascii() {
        return word.to_string();
    }
    let mut s = Stemmer {
        b: word.as_bytes().to_vec(),
        j: -1,
    };
    s.step1ab();
    s.step1c();
    s.step2();
    s.step3();
    s.step4();
    s.step5();
    String::from_utf8(s.b).expect("ascii in, ascii out")
}

struct Stemmer {
    b: Vec<u8>,
    // end of the stem candidate after the last successful `ends`
    j: isize,
}

impl Stemmer {
    fn k(&self) -> usize {
        self.b.len() - 1
    }

    fn is_consonant(&self, i: usize) -> bool {
        match self.b[i] {
            b'a' | b'e' | b'i' | b'o' | b'u' => false,
            b'y' => i == 0 || !self.is_consonant(i - 1),
            _ => true,
        }
    }

    // number of VC sequences in b[0..=j]
    fn measure(&self) -> usize {
        let end = self.j;
        let mut m = 0;
        let mut i: isize = 0;
        loop {
            if i > end {
                return m;
            }
            if !self.is_consonant(i as usize) {
                break;
            }
            i += 1;
        }
        i += 1;
        loop {
            loop {
                if i > end {
                    return m;
                }
                if self.is_consonant(i as usize) {
                    break;
                }
                i += 1;
            }
            i += 1;
            m += 1;
            loop {
                if i > end {
                    return m;
                }
                if !self.is_consonant(i as usize) {
                    break;
                }
                i += 1;
            }
            i += 1;
        }
    }

    fn vowel_in_stem(&self) -> bool {
        (0..=self.j).any(|i| !self.is_consonant(i as usize))
    }

    fn double_consonant(&self, i: usize) -> bool {
        i >= 1 && self.b[i] == self.b[i - 1] && self.is_consonant(i)
    }

    // cvc ending at i where the final c is not w, x or y (the *o condition)
    fn cvc(&self, i: isize) -> bool {
        if i < 2 {
            return false;
        }
        let i = i as usize;
        if !self.is_consonant(i) || self.is_consonant(i - 1) || !self.is_consonant(i - 2) {
            return false;
        }
        !matches!(self.b[i], b'w' | b'x' | b'y')
    }

    // does b end with `suffix`? sets j to the stem end on success
    fn ends(&mut self, suffix: &[u8]) -> bool {
        let n = suffix.len();
        if n > self.b.len() {
            return false;
        }
        if &self.b[self.b.len() - n..] == suffix {
            self.j = (self.b.len() - n) as isize - 1;
            true
        } else {
            false
        }
    }

    fn set_to(&mut self, replacement: &[u8]) {
        self.b.truncate((self.j + 1) as usize);
        self.b.extend_from_slice(replacement);
    }

    fn replace_if_m_positive(&mut self, replacement: &[u8]) {
        if self.measure() > 0 {
            self.set_to(replacement);
        }
    }

    fn step1ab(&mut self) {
        if self.b.ends_with(b"s") {
            if self.ends(b"sses") {
                self.b.truncate(self.b.len() - 2);
            } else if self.ends(b"ies") {
                self.set_to(b"i");
            } else if self.b.len() >= 2 && self.b[self.b.len() - 2] != b's' {
                self.b.truncate(self.b.len() - 1);
            }
        }
        if self.ends(b"eed") {
            if self.measure() > 0 {
                self.b.truncate(self.b.len() - 1);
            }
        } else if (self.ends(b"ed") || self.ends(b"ing")) && self.vowel_in_stem() {
            self.b.truncate((self.j + 1) as usize);
            if self.ends(b"at") {
                self.set_to(b"ate");
            } else if self.ends(b"bl") {
                self.set_to(b"ble");
            } else if self.ends(b"iz") {
                self.set_to(b"ize");
            } else if self.double_consonant(self.k()) {
                if !matches!(self.b[self.k()], b'l' | b's' | b'z') {
                    self.b.truncate(self.b.len() - 1);
                }
            } else {
                self.j = self.k() as isize;
                if self.measure() == 1 && self.cvc(self.k() as isize) {
                    self.b.push(b'e');
                }
            }
        }
    }

    fn step1c(&mut self) {
        if self.ends(b"y") && self.vowel_in_stem() {
            let k = self.k();
            self.b[k] = b'i';
        }
    }

    fn step2(&mut self) {
        if self.b.len() < 3 {
            return;
        }
        // dispatch on the penultimate letter, as in the reference code
        match self.b[self.k() - 1] {
            b'a' => {
                if self.ends(b"ational") {
                    self.replace_if_m_positive(b"ate");
                } else if self.ends(b"tional") {
                    self.replace_if_m_positive(b"tion");
                }
            }
            b'c' => {
                if self.ends(b"enci") {
                    self.replace_if_m_positive(b"ence");
                } else if self.ends(b"anci") {
                    self.replace_if_m_positive(b"ance");
                }
            }
            b'e' => {
                if self.ends(b"izer") {
                    self.replace_if_m_positive(b"ize");
                }
            }
            b'l' => {
                if self.ends(b"abli") {
                    self.replace_if_m_positive(b"able");
                } else if self.ends(b"alli") {
                    self.replace_if_m_positive(b"al");
                } else if self.ends(b"entli") {
                    self.replace_if_m_positive(b"ent");
                } else if self.ends(b"eli") {
                    self.replace_if_m_positive(b"e");
                } else if self.ends(b"ousli") {
                    self.replace_if_m_positive(b"ous");
                }
            }
            b'o' => {
                if self.ends(b"ization") {
                    self.replace_if_m_positive(b"ize");
                } else if self.ends(b"ation") || self.ends(b"ator") {
                    self.replace_if_m_positive(b"ate");
                }
            }
            b's' => {
                if self.ends(b"alism") {
                    self.replace_if_m_positive(b"al");
                } else if self.ends(b"iveness") {
                    self.replace_if_m_positive(b"ive");
                } else if self.ends(b"fulness") {
                    self.replace_if_m_positive(b"ful");
                } else if self.ends(b"ousness") {
                    self.replace_if_m_positive(b"ous");
                }
            }
            b't' => {
                if self.ends(b"aliti") {
                    self.replace_if_m_positive(b"al");
                } else if self.ends(b"iviti") {
                    self.replace_if_m_positive(b"ive");
                } else if self.ends(b"biliti") {
                    self.replace_if_m_positive(b"ble");
                }
            }
            _ => {}
        }
    }

    fn step3(&mut self) {
        match self.b[self.k()] {
            b'e' => {
                if self.ends(b"icate") {
                    self.replace_if_m_positive(b"ic");
                } else if self.ends(b"ative") {
                    self.replace_if_m_positive(b"");
                } else if self.ends(b"alize") {
                    self.replace_if_m_positive(b"al");
                }
            }
            b'i' => {
                if self.ends(b"iciti") {
                    self.replace_if_m_positive(b"ic");
                }
            }
            b'l' => {
                if self.ends(b"ical") {
                    self.replace_if_m_positive(b"ic");
                } else if self.ends(b"ful") {
                    self.replace_if_m_positive(b"");
                }
            }
            b's' => {
                if self.ends(b"ness") {
                    self.replace_if_m_positive(b"");
                }
            }
            _ => {}
        }
    }

    fn step4(&mut self) {
        if self.b.len() < 3 {
            return;
        }
        let matched = match self.b[self.k() - 1] {
            b'a' => self.ends(b"al"),
            b'c' => self.ends(b"ance") || self.ends(b"ence"),
            b'e' => self.ends(b"er"),
            b'i' => self.ends(b"ic"),
            b'l' => self.ends(b"able") || self.ends(b"ible"),
            b'n' => {
                self.ends(b"ant")
                    || self.ends(b"ement")
                    || self.ends(b"ment")
                    || self.ends(b"ent")
            }
            b'o' => {
                (self.ends(b"ion")
                    && self.j >= 0
                    && matches!(self.b[self.j as usize], b's' | b't'))
                    || self.ends(b"ou")
            }
            b's' => self.ends(b"ism"),
            b't' => self.ends(b"ate") || self.ends(b"iti"),
            b'u' => self.ends(b"ous"),
            b'v' => self.ends(b"ive"),
            b'z' => self.ends(b"ize"),
            _ => false,
        };
        if matched && self.measure() > 1 {
            self.b.truncate((self.j + 1) as usize);
        }
    }

    fn step5(&mut self) {
        self.j = self.k() as isize;
        if self.b[self.k()] == b'e' {
            let m = self.measure();
            if m > 1 || (m == 1 && !self.cvc(self.k() as isize - 1)) {
                self.b.truncate(self.b.len() - 1);
            }
        }
        let k = self.k();
        if self.b[k] == b'l' && self.double_consonant(k) {
            self.j = k as isize;
            if self.measure() > 1 {
                self.b.truncate(self.b.len() - 1);
            }
        }
    }
}
