use serde::{Deserialize, Serialize};

/// `12439554041857 = 2^11 * 3 * 19 * 1447 * 73643 + 1`, prime and `1 mod 1024`.
pub const Q0: u64 = 12439554041857;
/// Modulus of the original Dilithium round-3 parameter sets.
pub const Q_DILITHIUM: u64 = (1 << 23) - 8191;
/// Modulus of Dilithium-QROM; `5 mod 8`, so no NTT at `n = 512`.
pub const Q_DILITHIUM_QROM: u64 = (1 << 45) - 21283;

/// The full tuple `(q, n, k, l, d, tau, gamma1, gamma2, eta, eta', beta)`.
///
/// `eta_prime` is the MLWE noise bound used when reducing SelfTargetMSIS to
/// MLWE; sets that were not derived through that reduction leave it empty.
/// `level` is the NIST level whose query bound the reduction loss is charged
/// against.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParameterSet {
    pub name: String,
    #[serde(default)]
    pub level: Option<u8>,
    pub q: u64,
    pub n: usize,
    pub k: usize,
    pub l: usize,
    pub d: u32,
    pub tau: usize,
    pub gamma1: u64,
    pub gamma2: u64,
    pub eta: u64,
    #[serde(default)]
    pub eta_prime: Option<u64>,
    pub beta: u64,
}

/// Which published table a built-in set comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SourceTable {
    /// Dilithium comparison (SL2/3/5).
    Table2,
    /// Dilithium-QROM comparison (recommended / very high).
    Table3,
    /// NIST levels 1, 2, 3 and 4/5.
    Table5,
}

impl SourceTable {
    pub fn label(self) -> &'static str {
        match self {
            SourceTable::Table2 => "table2",
            SourceTable::Table3 => "table3",
            SourceTable::Table5 => "table5",
        }
    }
}

/// A built-in set with its wire identifier.
#[derive(Clone, Debug)]
pub struct BuiltinSet {
    pub id: &'static str,
    pub params_id: u8,
    pub table: SourceTable,
    pub params: ParameterSet,
}

/// Wire identifier for sets loaded from a params file.
pub const CUSTOM_PARAMS_ID: u8 = 0;

#[allow(clippy::too_many_arguments)]
fn set(
    name: &str,
    level: Option<u8>,
    q: u64,
    n: usize,
    (k, l): (usize, usize),
    d: u32,
    tau: usize,
    gamma1: u64,
    gamma2: u64,
    eta: u64,
    eta_prime: Option<u64>,
) -> ParameterSet {
    ParameterSet {
        name: name.to_string(),
        level,
        q,
        n,
        k,
        l,
        d,
        tau,
        gamma1,
        gamma2,
        eta,
        eta_prime,
        beta: tau as u64 * eta,
    }
}

/// Every parameter column of the three comparison tables, in table order.
pub fn builtin_sets() -> Vec<BuiltinSet> {
    use SourceTable::*;
    #[rustfmt::skip]
    let rows = [
        ("dil-sl2", Table2, set("dil-sl2", None, Q_DILITHIUM, 256, (4, 4), 13, 39, 1 << 17, 95232, 2, None)),
        ("dil-sl3", Table2, set("dil-sl3", None, Q_DILITHIUM, 256, (6, 5), 13, 49, 1 << 19, 261888, 4, None)),
        ("dil-sl5", Table2, set("dil-sl5", None, Q_DILITHIUM, 256, (8, 7), 13, 60, 1 << 19, 261888, 2, None)),
        ("ours-sl2", Table2, set("ours-sl2", Some(2), Q0, 512, (10, 4), 15, 40, 220929, 441858, 2, Some(8))),
        ("ours-sl3", Table2, set("ours-sl3", Some(3), Q0, 512, (12, 8), 15, 40, 370432, 740864, 2, Some(4))),
        ("ours-sl5", Table2, set("ours-sl5", Some(5), Q0, 512, (16, 13), 15, 40, 555648, 1111296, 2, Some(2))),
        ("qrom-rec", Table3, set("qrom-rec", None, Q_DILITHIUM_QROM, 512, (4, 4), 15, 46, 905679, 905679, 7, None)),
        ("qrom-vh", Table3, set("qrom-vh", None, Q_DILITHIUM_QROM, 512, (5, 5), 15, 46, 905679, 905679, 3, None)),
        ("ours-rec", Table3, set("ours-rec", Some(3), Q0, 512, (12, 5), 15, 40, 279949, 555648, 2, Some(5))),
        ("ours-vh", Table3, set("ours-vh", Some(3), Q0, 512, (13, 8), 15, 40, 370432, 740864, 2, Some(4))),
        ("nist-sl1", Table5, set("nist-sl1", Some(1), Q0, 512, (7, 7), 15, 40, 277824, 555648, 2, Some(7))),
        ("nist-sl2", Table5, set("nist-sl2", Some(2), Q0, 512, (9, 9), 15, 40, 329916, 659832, 2, Some(5))),
        ("nist-sl3", Table5, set("nist-sl3", Some(3), Q0, 512, (10, 10), 15, 40, 370432, 740864, 2, Some(4))),
        ("nist-sl5", Table5, set("nist-sl5", Some(5), Q0, 512, (13, 13), 15, 40, 555648, 1111296, 2, Some(2))),
    ];
    rows.into_iter()
        .enumerate()
        .map(|(i, (id, table, params))| BuiltinSet {
            id,
            params_id: i as u8 + 1,
            table,
            params,
        })
        .collect()
}

pub fn builtin(id: &str) -> Option<BuiltinSet> {
    builtin_sets().into_iter().find(|b| b.id == id)
}

pub fn builtin_by_params_id(params_id: u8) -> Option<BuiltinSet> {
    builtin_sets().into_iter().find(|b| b.params_id == params_id)
}

impl ParameterSet {
    /// Wire identifier: the built-in id when the tuple matches one exactly.
    pub fn params_id(&self) -> u8 {
        builtin_sets()
            .into_iter()
            .find(|b| b.params.same_tuple(self))
            .map_or(CUSTOM_PARAMS_ID, |b| b.params_id)
    }

    /// Equality ignoring the name.
    pub fn same_tuple(&self, other: &ParameterSet) -> bool {
        let strip = |p: &ParameterSet| ParameterSet {
            name: String::new(),
            ..p.clone()
        };
        strip(self) == strip(other)
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("parameter sets always serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_unique_and_resolvable() {
        let sets = builtin_sets();
        assert_eq!(sets.len(), 14);
        for b in &sets {
            assert_eq!(builtin(b.id).unwrap().params_id, b.params_id);
            assert_eq!(b.params.params_id(), b.params_id);
            assert_eq!(builtin_by_params_id(b.params_id).unwrap().id, b.id);
            assert_eq!(b.params.beta, b.params.tau as u64 * b.params.eta);
        }
        assert!(builtin("sl9").is_none());
    }

    #[test]
    fn json_roundtrip() {
        let p = builtin("ours-sl2").unwrap().params;
        let back = ParameterSet::from_json(&p.to_json()).unwrap();
        assert_eq!(back, p);
        let mut custom = p.clone();
        custom.gamma1 += 1;
        assert_eq!(custom.params_id(), CUSTOM_PARAMS_ID);
    }

    #[test]
    fn missing_eta_prime_defaults_to_none() {
        let s = r#"{"name":"x","q":17,"n":4,"k":1,"l":1,"d":1,"tau":1,"gamma1":3,"gamma2":4,"eta":1,"beta":1}"#;
        let p = ParameterSet::from_json(s).unwrap();
        assert_eq!(p.eta_prime, None);
        assert_eq!(p.level, None);
    }
}
