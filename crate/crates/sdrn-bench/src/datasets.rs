//! The six built-in UCI datasets: source URLs, checksums, and the fixed
//! column mappings that turn each file into feature vectors plus integer
//! class labels. Feature values are used exactly as they appear in the
//! files — no normalization, ever.

/// How the ground-truth class id is read from a row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelRule {
    /// A string column looked up in a fixed name → id table.
    Categorical { col: usize },
    /// A numeric column truncated toward zero (e.g. 0.5 → 0, 3.7 → 3).
    TruncatedFloat { col: usize },
    /// A column that already holds a small non-negative integer.
    Integer { col: usize },
    /// Two small integer columns combined as `stride * a + b`, so every
    /// (a, b) pair gets a distinct id.
    Combined { col_a: usize, col_b: usize, stride: usize },
}

#[derive(Debug, Clone, Copy)]
pub struct DatasetSpec {
    /// CLI name.
    pub name: &'static str,
    /// File name in the local cache directory.
    pub cache_name: &'static str,
    /// Canonical download URL. `SDRN_MIRROR` may replace its
    /// `https://github.com` prefix for environments that reach GitHub
    /// through a proxy.
    pub url: &'static str,
    /// SHA-256 of the exact file served by `url`, as lowercase hex.
    pub sha256: &'static str,
    /// Half-open range of feature columns.
    pub feature_cols: (usize, usize),
    pub label: LabelRule,
}

/// Fixed id table for the balance-scale class column.
pub const BALANCE_CLASSES: &[(&str, usize)] = &[("B", 0), ("L", 1), ("R", 2)];

macro_rules! data_url {
    ($file:literal) => {
        concat!(
            "https://github.com/Uehwan/Incremental-Learning/raw/",
            "a6d0bf0e4cf085a70490bc6335baf54442fa6eb7/sDRN/data/uci_real_data/",
            $file
        )
    };
}

/// Balance scale: class letter first, then four 1–5 integer features.
pub const BALANCE: DatasetSpec = DatasetSpec {
    name: "balance",
    cache_name: "balance.data",
    url: data_url!("balance_scale_dataset.data"),
    sha256: "5611187ef7345d807aa8ae22615945ade52a190537c0b1434bd44c3e877c5bb4",
    feature_cols: (1, 5),
    label: LabelRule::Categorical { col: 0 },
};

/// Liver disorders: five blood-test features; the daily-drinks column is
/// truncated to an integer and used as the class id (the final selector
/// column is ignored).
pub const LIVER: DatasetSpec = DatasetSpec {
    name: "liver",
    cache_name: "liver.data",
    url: data_url!("bupa_dataset.data"),
    sha256: "a166a3e7a6f4dc41aaaedc59a107e57d8adcaeb8821f0873d756982f1ea74c92",
    feature_cols: (0, 5),
    label: LabelRule::TruncatedFloat { col: 5 },
};

/// Blood transfusion: four donation-history features, binary donated flag.
pub const TRANSFUSION: DatasetSpec = DatasetSpec {
    name: "transfusion",
    cache_name: "transfusion.data",
    url: data_url!("transfusion_dataset.data"),
    sha256: "eed55f28df8192e6029928d68229d01e27e4c1b570b7ed240824481cf9286590",
    feature_cols: (0, 4),
    label: LabelRule::Integer { col: 4 },
};

/// Banknote authentication: four wavelet statistics, binary forgery flag.
pub const BANKNOTE: DatasetSpec = DatasetSpec {
    name: "banknote",
    cache_name: "banknote.txt",
    url: data_url!("data_banknote_authentication.txt"),
    sha256: "564ac22b61d87388b1662adee2867e5d382aae78afb0bf5d6745c1a843174b8e",
    feature_cols: (0, 4),
    label: LabelRule::Integer { col: 4 },
};

/// Car evaluation: six ordinal features and the acceptability class, all
/// pre-encoded as small integers in the source file. The encoding is
/// 1-based in file order: buying/maint low=1 med=2 high=3 vhigh=4; doors
/// 2,3,4,"5more"→2..5; persons 2,4,"more"→2,4,6; lug_boot small=1 med=2
/// big=3; safety low=1 med=2 high=3; class unacc=1 acc=2 good=3 vgood=4.
/// Only differences of feature values matter downstream, so any fixed
/// affine re-encoding would produce identical clustering results.
pub const CAR: DatasetSpec = DatasetSpec {
    name: "car",
    cache_name: "car.txt",
    url: data_url!("car.txt"),
    sha256: "accbda5592afa42810fb2218efb7a9a94369a908ce0f9732223c40a1fe8b5825",
    feature_cols: (0, 6),
    label: LabelRule::Integer { col: 6 },
};

/// Wholesale customers: six annual-spend features in raw monetary units
/// (this dataset is the heavy-tailed-scale stress case); the class id
/// combines the Channel and Region columns into one id per pair.
pub const WHOLESALE: DatasetSpec = DatasetSpec {
    name: "wholesale",
    cache_name: "wholesale.csv",
    url: data_url!("Wholesale%20customers%20data.csv"),
    sha256: "c0e24d1aa295293e869e7253b7a95c066a0caf81dd91417eb8e2b9ccd18edbaa",
    feature_cols: (2, 8),
    label: LabelRule::Combined { col_a: 0, col_b: 1, stride: 3 },
};

pub const ALL: &[DatasetSpec] = &[BALANCE, LIVER, TRANSFUSION, BANKNOTE, CAR, WHOLESALE];

/// Looks up a built-in dataset by CLI name.
pub fn by_name(name: &str) -> Option<DatasetSpec> {
    ALL.iter().find(|s| s.name == name).copied()
}
