/// Search budgets. Exceeding one yields [`crate::Error::Resource`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Budgets {
    /// Brute force runs only when `k^free_edges <= 2^brute_force_log2`.
    pub brute_force_log2: u32,
    /// Largest request set for inclusion-exclusion counting.
    pub ie_requests: usize,
    /// Largest `|V1|` for the greedy Jukna cover.
    pub greedy_cover_side: usize,
    /// Recursion nodes allowed in one branching search.
    pub search_nodes: u64,
    /// Largest request set the dispatcher hands to the guided-walk
    /// branching; larger sets go to the propagation search.
    pub branch_requests: usize,
    /// Nodes the dispatcher lets the branching spend before switching to the
    /// propagation search.
    pub branch_nodes: u64,
    /// Request subsets the maximum solver may try.
    pub max_subsets: u64,
    /// Candidate paths the brute force may precompute.
    pub max_paths: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            brute_force_log2: 40,
            ie_requests: 26,
            greedy_cover_side: 20,
            search_nodes: 20_000_000,
            branch_requests: 16,
            branch_nodes: 500_000,
            max_subsets: 1_000_000,
            max_paths: 4_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    pub budgets: Budgets,
    /// Threads for partitionable searches.
    pub workers: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config { budgets: Budgets::default(), workers: 1 }
    }
}
