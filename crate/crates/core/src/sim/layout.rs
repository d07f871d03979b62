// Copyright 2026 The qitime Developers
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

use std::ops::Range;

use crate::error::{Error, Result};

/// Ordered, named qubit registers. The first register sits at qubit 0.
///
/// Registers may have width zero (a one-dimensional placeholder); they are
/// skipped by gate application and projection but keep indexing uniform.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegisterLayout {
    registers: Vec<(String, usize)>,
}

impl RegisterLayout {
    pub fn new(registers: &[(&str, usize)]) -> Result<Self> {
        if registers.is_empty() {
            return Err(Error::invalid("layout needs at least one register"));
        }
        let mut seen = std::collections::HashSet::new();
        for (name, _) in registers {
            if name.is_empty() {
                return Err(Error::invalid("register names must be non-empty"));
            }
            if !seen.insert(*name) {
                return Err(Error::invalid(format!("duplicate register `{name}`")));
            }
        }
        Ok(RegisterLayout {
            registers: registers
                .iter()
                .map(|(n, w)| (n.to_string(), *w))
                .collect(),
        })
    }

    pub fn total_qubits(&self) -> usize {
        self.registers.iter().map(|(_, w)| w).sum()
    }

    pub fn dim(&self) -> usize {
        1usize << self.total_qubits()
    }

    pub fn registers(&self) -> impl Iterator<Item = (&str, usize)> {
        self.registers.iter().map(|(n, w)| (n.as_str(), *w))
    }

    pub fn width(&self, name: &str) -> Result<usize> {
        self.registers
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, w)| *w)
            .ok_or_else(|| Error::UnknownRegister(name.to_string()))
    }

    /// Qubit index range of a register, low to high.
    pub fn qubit_range(&self, name: &str) -> Result<Range<usize>> {
        let mut offset = 0;
        for (n, w) in &self.registers {
            if n == name {
                return Ok(offset..offset + w);
            }
            offset += w;
        }
        Err(Error::UnknownRegister(name.to_string()))
    }

    /// Targets of a register as a list of qubit indices, low to high.
    pub fn qubits_of(&self, name: &str) -> Result<Vec<usize>> {
        Ok(self.qubit_range(name)?.collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_stack_from_low_qubits() {
        let l = RegisterLayout::new(&[("s", 1), ("a", 1), ("abar", 2), ("A", 1)]).unwrap();
        assert_eq!(l.total_qubits(), 5);
        assert_eq!(l.qubit_range("s").unwrap(), 0..1);
        assert_eq!(l.qubit_range("a").unwrap(), 1..2);
        assert_eq!(l.qubit_range("abar").unwrap(), 2..4);
        assert_eq!(l.qubit_range("A").unwrap(), 4..5);
    }

    #[test]
    fn zero_width_register_is_allowed() {
        let l = RegisterLayout::new(&[("s", 2), ("abar", 0)]).unwrap();
        assert_eq!(l.total_qubits(), 2);
        assert_eq!(l.qubit_range("abar").unwrap(), 2..2);
    }

    #[test]
    fn duplicate_and_unknown_names_are_errors() {
        assert!(RegisterLayout::new(&[("s", 1), ("s", 2)]).is_err());
        let l = RegisterLayout::new(&[("s", 1)]).unwrap();
        assert!(l.qubit_range("a").is_err());
    }
}
