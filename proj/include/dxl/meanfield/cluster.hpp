#pragma once
#include <vector>

#include "dxl/meanfield/dmft.hpp"

namespace dxl {

// Connected components of the strong-bond graph {|J_ij| >= J_0}, labeled by
// their smallest member.
struct ClusterPartition {
    double threshold = 0.0;
    std::vector<std::vector<std::size_t>> clusters;  // members sorted ascending
    std::vector<std::size_t> cluster_of;             // spin -> cluster index
};

ClusterPartition cluster_partition(const CouplingMatrix& couplings, double j0_threshold);

struct CdmftCaps {
    std::size_t quantum_cap = 8;  // hard cluster-size cap (resource error above)
    std::size_t dense_cap = 6;    // dense trace evaluation up to here, typicality beyond
};

// Cluster DMFT: intra-cluster couplings evolve coherently (trotterized
// propagation under piecewise-constant sampled fields); all couplings to
// spins outside the cluster act as self-consistent Gaussian noise,
// D_i^mu = kappa^2 g_mu^2 sum_{j not in cluster(i)} J_ij^2 C_j^mu(t).
// With every cluster a singleton this reduces to dmft_solve.
SelfConsistentResult cdmft_solve(const CouplingMatrix& couplings, const AnisotropyVector& g,
                                 double j0_threshold, const std::vector<double>& t_grid,
                                 const MeanFieldOptions& opt, const CdmftCaps& caps = {});

} // namespace dxl
