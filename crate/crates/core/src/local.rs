//! Local structure of a module: at every object, the multi-flag generated by
//! kernels and images of all composites, refined by pulling back and pushing
//! forward along composites until nothing changes.

use crate::cmod::{CModule, MorphismTable};
use crate::error::{Error, Result};
use crate::linalg::Subspace;
use crate::multiflag::{MultiFlag, DEFAULT_FLAG_CAP};

pub const DEFAULT_MAX_ITERS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LocalConfig {
    pub max_iters: usize,
    pub flag_cap: usize,
}

impl Default for LocalConfig {
    fn default() -> Self {
        LocalConfig {
            max_iters: DEFAULT_MAX_ITERS,
            flag_cap: DEFAULT_FLAG_CAP,
        }
    }
}

/// One multi-flag per object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagAssignment {
    pub flags: Vec<MultiFlag>,
}

impl FlagAssignment {
    pub fn trivial(m: &CModule) -> Self {
        FlagAssignment {
            flags: m
                .dims()
                .iter()
                .map(|&d| MultiFlag::trivial(m.field(), d))
                .collect(),
        }
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.flags.iter().map(MultiFlag::len).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    /// The first stage `N` with `F_{N+1} = F_N`.
    Stabilized(usize),
    /// Gave up after `iterations` refinements, or when a flag outgrew the cap.
    CapHit { iterations: usize },
}

#[derive(Clone, Debug)]
pub struct LocalStructure {
    /// The last stage computed; the limit when stabilized.
    pub flags: FlagAssignment,
    pub status: Status,
    /// Flag sizes per object, one row per stage computed.
    pub trace: Vec<Vec<usize>>,
    /// Sum of the excesses of all flags; `None` unless stabilized.
    pub total_excess: Option<usize>,
}

impl LocalStructure {
    pub fn is_stabilized(&self) -> bool {
        matches!(self.status, Status::Stabilized(_))
    }

    pub fn flag(&self, x: usize) -> &MultiFlag {
        &self.flags.flags[x]
    }
}

/// Stage 0: at `x`, kernels of all composites out of `x` and images of all
/// composites into `x`, identities included.
pub fn initial_flag(m: &CModule, t: &MorphismTable, cap: usize) -> Result<FlagAssignment> {
    let cat = m.category();
    let mut flags = Vec::with_capacity(cat.len());
    for x in 0..cat.len() {
        let mut gens = Vec::new();
        for y in cat.up_set(x) {
            gens.push(Subspace::kernel(t.get(x, y)));
        }
        for z in cat.down_set(x) {
            gens.push(Subspace::span(t.get(z, x)));
        }
        flags.push(MultiFlag::close(m.field(), m.dim(x), &gens, cap)?);
    }
    Ok(FlagAssignment { flags })
}

/// One refinement: add preimages of members above and images of members
/// below, then close.
pub fn refine_step(
    m: &CModule,
    t: &MorphismTable,
    current: &FlagAssignment,
    cap: usize,
) -> Result<FlagAssignment> {
    let cat = m.category();
    let mut flags = Vec::with_capacity(cat.len());
    for x in 0..cat.len() {
        let mut gens = Vec::new();
        for y in cat.up_set(x) {
            if y == x {
                continue;
            }
            for w in current.flags[y].members() {
                gens.push(w.preimage(t.get(x, y))?);
            }
        }
        for z in cat.down_set(x) {
            if z == x {
                continue;
            }
            for w in current.flags[z].members() {
                gens.push(w.image(t.get(z, x))?);
            }
        }
        flags.push(current.flags[x].extend(&gens, cap)?);
    }
    Ok(FlagAssignment { flags })
}

pub fn compute(m: &CModule, t: &MorphismTable, cfg: LocalConfig) -> LocalStructure {
    match initial_flag(m, t, cfg.flag_cap) {
        Ok(start) => iterate(m, t, start, cfg),
        Err(_) => LocalStructure {
            flags: FlagAssignment::trivial(m),
            status: Status::CapHit { iterations: 0 },
            trace: Vec::new(),
            total_excess: None,
        },
    }
}

/// The same recursion, seeded with the closure of stage 0 and `seed`.
pub fn relative_compute(
    m: &CModule,
    t: &MorphismTable,
    seed: &FlagAssignment,
    cfg: LocalConfig,
) -> Result<LocalStructure> {
    if seed.flags.len() != m.category().len()
        || seed
            .flags
            .iter()
            .zip(m.dims())
            .any(|(f, &d)| f.ambient_dim() != d)
    {
        return Err(Error::InconsistentDims("relative flag assignment".into()));
    }
    let Ok(start) = initial_flag(m, t, cfg.flag_cap) else {
        return Ok(LocalStructure {
            flags: FlagAssignment::trivial(m),
            status: Status::CapHit { iterations: 0 },
            trace: Vec::new(),
            total_excess: None,
        });
    };
    let mut flags = Vec::with_capacity(start.flags.len());
    for (f, s) in start.flags.iter().zip(&seed.flags) {
        match f.extend(s.members(), cfg.flag_cap) {
            Ok(c) => flags.push(c),
            Err(Error::FlagCapExceeded { .. }) => {
                return Ok(LocalStructure {
                    flags: start,
                    status: Status::CapHit { iterations: 0 },
                    trace: Vec::new(),
                    total_excess: None,
                })
            }
            Err(e) => return Err(e),
        }
    }
    Ok(iterate(m, t, FlagAssignment { flags }, cfg))
}

fn iterate(m: &CModule, t: &MorphismTable, start: FlagAssignment, cfg: LocalConfig) -> LocalStructure {
    let mut current = start;
    let mut trace = vec![current.sizes()];
    for n in 0..cfg.max_iters {
        let next = match refine_step(m, t, &current, cfg.flag_cap) {
            Ok(next) => next,
            Err(_) => {
                return LocalStructure {
                    flags: current,
                    status: Status::CapHit { iterations: n },
                    trace,
                    total_excess: None,
                }
            }
        };
        if next == current {
            let total = current.flags.iter().map(MultiFlag::excess).sum();
            return LocalStructure {
                flags: current,
                status: Status::Stabilized(n),
                trace,
                total_excess: Some(total),
            };
        }
        trace.push(next.sizes());
        current = next;
    }
    LocalStructure {
        flags: current,
        status: Status::CapHit {
            iterations: cfg.max_iters,
        },
        trace,
        total_excess: None,
    }
}
