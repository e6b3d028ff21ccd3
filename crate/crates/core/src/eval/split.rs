use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::EvalError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchmarkSplit {
    pub train: Vec<String>,
    pub test: Vec<String>,
}

impl BenchmarkSplit {
    pub fn test_fraction(&self) -> f64 {
        let n = self.train.len() + self.test.len();
        if n == 0 {
            0.0
        } else {
            self.test.len() as f64 / n as f64
        }
    }
}

/// First `k_test` ids of every region go to test, the rest to train.
pub fn split_benchmark(regions: &[(String, Vec<String>)], k_test: usize) -> Result<BenchmarkSplit, EvalError> {
    let mut split = BenchmarkSplit { train: Vec::new(), test: Vec::new() };
    for (region, ids) in regions {
        if ids.len() <= k_test {
            return Err(EvalError::TooFewTiles { region: region.clone(), count: ids.len(), k: k_test });
        }
        split.test.extend(ids[..k_test].iter().cloned());
        split.train.extend(ids[k_test..].iter().cloned());
    }
    Ok(split)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeSet;
    use alloc::format;

    fn regions(n: usize, tiles: usize) -> Vec<(String, Vec<String>)> {
        (0..n).map(|r| (format!("city{r}"), (1..=tiles).map(|t| format!("city{r}{t}")).collect())).collect()
    }

    #[test]
    fn five_cities_of_thirty_six() {
        let s = split_benchmark(&regions(5, 36), 5).unwrap();
        assert_eq!((s.test.len(), s.train.len()), (25, 155));
        assert_eq!(libm::round(s.test_fraction() * 100.0), 14.0);
        let test: BTreeSet<_> = s.test.iter().collect();
        assert!(s.train.iter().all(|t| !test.contains(t)));
        assert!(s.test.contains(&String::from("city05")) && !s.test.contains(&String::from("city06")));
    }

    #[test]
    fn zero_and_too_few() {
        let s = split_benchmark(&regions(2, 4), 0).unwrap();
        assert!(s.test.is_empty() && s.train.len() == 8);
        assert!(matches!(split_benchmark(&regions(1, 3), 5), Err(EvalError::TooFewTiles { count: 3, .. })));
    }
}
