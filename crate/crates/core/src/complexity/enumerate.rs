//! Exhaustive enumeration of halting programs.
//!
//! The search walks the tree of codeword sequences instead of testing all
//! `2^(L+1) - 1` bit strings: every bit string of length at most `L` either
//! ends inside that tree or extends a node that already halted or failed,
//! so the tree walk visits exactly the halting programs the brute-force scan
//! would find. Subtrees are independent, which is what lets the walk be
//! split across workers by program prefix.

use rayon::prelude::*;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::machines::{Fault, Instruction, Machine, MachineId, StepLimits};

/// Default cap on the nominal candidate count `2^(limit+1) - 1`.
pub const DEFAULT_WORK_BUDGET: u64 = 1 << 26;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub limits: StepLimits,
    /// Maximum number of candidate programs an enumeration may stand for.
    pub work_budget: u64,
    /// Worker threads; 1 runs on the calling thread.
    pub workers: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            limits: StepLimits::default(),
            work_budget: DEFAULT_WORK_BUDGET,
            workers: 1,
        }
    }
}

impl SearchConfig {
    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }

    pub fn with_budget(mut self, work_budget: u64) -> Self {
        self.work_budget = work_budget;
        self
    }

    pub fn with_limits(mut self, limits: StepLimits) -> Self {
        self.limits = limits;
        self
    }

    pub(crate) fn check_budget(&self, limit: usize) -> Result<()> {
        let candidates = if limit >= 127 {
            u128::MAX
        } else {
            (1u128 << (limit + 1)) - 1
        };
        if candidates > self.work_budget as u128 {
            return Err(Error::WorkBudget {
                limit,
                candidates,
                budget: self.work_budget,
            });
        }
        Ok(())
    }
}

/// Every halting program of a machine up to a length bound, with its output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProgramTable {
    pub(crate) machine: MachineId,
    pub(crate) aux: Option<BitString>,
    pub(crate) limit: usize,
    pub(crate) entries: Vec<(BitString, BitString)>,
    pub(crate) cap_exceeded: u64,
}

impl ProgramTable {
    pub fn machine(&self) -> MachineId {
        self.machine
    }

    pub fn aux(&self) -> Option<&BitString> {
        self.aux.as_ref()
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    /// `(program, output)` pairs in shortlex program order.
    pub fn entries(&self) -> &[(BitString, BitString)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of program prefixes whose output overflowed the cap. These are
    /// excluded from every K and probability computation.
    pub fn cap_exceeded(&self) -> u64 {
        self.cap_exceeded
    }

    pub fn machine_instance(&self) -> Machine {
        Machine::new(self.machine, self.aux.as_ref()).expect("table built from a valid machine")
    }
}

struct Node {
    program: BitString,
    output: BitString,
    aux_cursor: usize,
}

#[derive(Default)]
struct Harvest {
    entries: Vec<(BitString, BitString)>,
    cap_exceeded: u64,
}

impl Harvest {
    fn merge(mut self, other: Harvest) -> Harvest {
        self.entries.extend(other.entries);
        self.cap_exceeded += other.cap_exceeded;
        self
    }
}

/// Expands one node by every codeword, pushing live children to `children`.
fn expand(
    machine: &Machine,
    node: &Node,
    limit: usize,
    limits: &StepLimits,
    harvest: &mut Harvest,
    children: &mut Vec<Node>,
) {
    for codeword in machine.id().table().codewords() {
        if node.program.len() + codeword.len as usize > limit {
            continue;
        }
        let Some(instruction) = codeword.instruction else {
            continue;
        };
        let mut program = node.program.clone();
        program.push_uint(codeword.code as u64, codeword.len as usize);
        if instruction == Instruction::Halt {
            harvest.entries.push((program, node.output.clone()));
            continue;
        }
        let mut output = node.output.clone();
        let mut aux_cursor = node.aux_cursor;
        match machine.apply(instruction, &mut output, &mut aux_cursor, limits) {
            Ok(()) => children.push(Node {
                program,
                output,
                aux_cursor,
            }),
            Err(Fault::CapExceeded) => harvest.cap_exceeded += 1,
            Err(Fault::AuxExhausted) => {}
        }
    }
}

fn walk(machine: &Machine, root: Node, limit: usize, limits: &StepLimits) -> Harvest {
    let mut harvest = Harvest::default();
    let mut stack = vec![root];
    let mut children = Vec::new();
    while let Some(node) = stack.pop() {
        expand(machine, &node, limit, limits, &mut harvest, &mut children);
        stack.append(&mut children);
    }
    harvest
}

pub(crate) fn enumerate_machine(
    machine: &Machine,
    limit: usize,
    config: &SearchConfig,
) -> Result<ProgramTable> {
    config.check_budget(limit)?;
    let root = Node {
        program: BitString::new(),
        output: BitString::new(),
        aux_cursor: 0,
    };

    let mut harvest = if config.workers <= 1 {
        walk(machine, root, limit, &config.limits)
    } else {
        // Breadth-first until there are enough independent subtrees.
        let target = config.workers * 8;
        let mut harvest = Harvest::default();
        let mut frontier = vec![root];
        while !frontier.is_empty() && frontier.len() < target {
            let mut next = Vec::new();
            for node in &frontier {
                expand(machine, node, limit, &config.limits, &mut harvest, &mut next);
            }
            frontier = next;
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.workers)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("cannot start workers: {e}")))?;
        let parts = pool.install(|| {
            frontier
                .into_par_iter()
                .map(|node| walk(machine, node, limit, &config.limits))
                .reduce(Harvest::default, Harvest::merge)
        });
        harvest.merge(parts)
    };

    harvest.entries.sort_unstable_by(|a, b| a.0.cmp(&b.0));
    Ok(ProgramTable {
        machine: machine.id(),
        aux: machine.aux().cloned(),
        limit,
        entries: harvest.entries,
        cap_exceeded: harvest.cap_exceeded,
    })
}

/// All halting programs of `machine` with length at most `limit`.
pub fn enumerate_halting(
    machine: MachineId,
    limit: usize,
    aux: Option<&BitString>,
    config: &SearchConfig,
) -> Result<ProgramTable> {
    let machine = Machine::new(machine, aux)?;
    enumerate_machine(&machine, limit, config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bs;
    use crate::machines::ExecutionOutcome;

    fn table(m: MachineId, limit: usize) -> ProgramTable {
        enumerate_halting(m, limit, None, &SearchConfig::default()).unwrap()
    }

    #[test]
    fn small_tables() {
        let t = table(MachineId::A, 4);
        let expected = vec![
            (bs("00"), bs("")),
            (bs("0100"), bs("0")),
            (bs("1000"), bs("1")),
            (bs("1100"), bs("")),
        ];
        assert_eq!(t.entries(), expected.as_slice());
        assert_eq!(table(MachineId::B, 1).entries(), &[(bs("0"), bs(""))]);
        assert!(table(MachineId::A, 1).is_empty());
        assert!(table(MachineId::A, 0).is_empty());
    }

    /// Brute force: run every candidate bit string and keep the exact halts.
    fn brute_force(machine: &Machine, limit: usize) -> Vec<(BitString, BitString)> {
        let limits = StepLimits::default();
        BitString::all_up_to(limit)
            .filter_map(|p| match machine.run(&p, &limits) {
                ExecutionOutcome::HaltedExact { output, .. } => Some((p, output)),
                _ => None,
            })
            .collect()
    }

    #[test]
    fn tree_walk_matches_brute_force() {
        let mut machines = vec![
            Machine::plain(MachineId::A).unwrap(),
            Machine::plain(MachineId::B).unwrap(),
        ];
        for aux in ["", "1", "01", "110"] {
            machines.push(Machine::conditional(&bs(aux)));
        }
        for m in &machines {
            for limit in [0, 1, 5, 10, 13] {
                let walked = enumerate_machine(m, limit, &SearchConfig::default()).unwrap();
                assert_eq!(walked.entries(), brute_force(m, limit).as_slice(), "{m:?} {limit}");
            }
        }
    }

    #[test]
    fn workers_do_not_change_results() {
        for m in [MachineId::A, MachineId::B] {
            let one = table(m, 16);
            for w in [2, 3, 8] {
                let many = enumerate_halting(m, 16, None, &SearchConfig::default().with_workers(w))
                    .unwrap();
                assert_eq!(one, many);
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let tight = SearchConfig::default().with_budget(1000);
        let err = enumerate_halting(MachineId::A, 10, None, &tight).unwrap_err();
        assert!(matches!(err, Error::WorkBudget { limit: 10, candidates: 2047, budget: 1000 }));
        assert!(enumerate_halting(MachineId::A, 8, None, &tight).is_ok());
        assert!(enumerate_halting(MachineId::A, 26, None, &SearchConfig::default()).is_err());
        assert!(enumerate_halting(MachineId::A, 500, None, &SearchConfig::default()).is_err());
    }

    #[test]
    fn cap_hits_are_counted_not_listed() {
        let cfg = SearchConfig::default().with_limits(StepLimits::new(2).unwrap());
        let t = enumerate_halting(MachineId::A, 8, None, &cfg).unwrap();
        assert!(t.cap_exceeded() > 0);
        assert!(t.entries().iter().all(|(_, o)| o.len() <= 2));
    }
}
