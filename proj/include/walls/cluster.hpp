#ifndef WALLS_CLUSTER_HPP
#define WALLS_CLUSTER_HPP

#include <string>
#include <vector>

#include "walls/scattering.hpp"

namespace walls {

// Lattice rank, skew form on the ambient basis, and the d-weights cutting
// out the diagonal sublattice N° = ⊕ d_i Z e_i.
struct FixedData {
    int n = 0;
    std::vector<std::vector<Rat>> skew;  // {e_i, e_j} on the ambient basis
    std::vector<long long> d;

    void validate() const;
    Rat pair(const std::vector<long long>& a, const std::vector<long long>& b) const;
};

struct Seed {
    std::vector<std::vector<long long>> e;  // e[i] = coordinates of the i-th basis vector

    long long det() const;
    friend bool operator==(const Seed& a, const Seed& b) { return a.e == b.e; }
};

Seed identity_seed(int n);

// epsilon_{ik} = {e_i, e_k} d_k; integer for valid data
std::vector<std::vector<long long>> epsilon_matrix(const FixedData& data, const Seed& s);

// e_i -> e_i + [eps_ik]_+ e_k (i != k), e_k -> -e_k. The epsilon matrix is
// involutive under repeated mutation; the basis itself returns only up to a
// unimodular transvection.
Seed mutate_seed(const FixedData& data, const Seed& s, int k);

// substitution data z^w -> z^w (1 + z^exchange)^{-<functional, w>}
struct PullbackRule {
    std::vector<long long> exchange;
    std::vector<long long> functional;
};
struct MutationPullbacks {
    PullbackRule x_side;  // monomials indexed over N
    PullbackRule a_side;  // monomials indexed over M° in the f-basis
};
MutationPullbacks mutation_pullbacks(const FixedData& data, const Seed& s, int k);

// d_i -> D/d_i with D = lcm(d), skew scaled by 1/D, written on the basis
// Le_i = d_i e_i.
FixedData langlands_dual(const FixedData& data);

struct QuotientData {
    std::vector<LatticeVector> e_bar;   // images of the seed basis in N/K
    std::vector<LatticeVector> de_bar;  // d_i e_bar_i
    std::vector<LatticeVector> v_bar;   // v_i on the chosen basis of N°/K°
    std::vector<long long> ind_de;      // divisibility of d_i e_bar_i in N°/K°
    std::vector<long long> ind_v;       // divisibility of v_bar_i in Hom(N°/K°, Z)
    std::vector<std::vector<Rat>> skew_bar;  // descended form on the N/K basis
};

// Deterministic Smith-form splitting of N -> N/K for K = ker p*.
QuotientData kernel_quotient(const FixedData& data, const Seed& s);

struct ClusterWall {
    LatticeVector monomial;  // full lattice exponent of the 1 + z^... factor
    long long exponent;      // wall function is (1 + z^monomial)^exponent
};

struct ClusterDiagramReport {
    std::vector<ClusterWall> blowup_side;        // orbifold blowup assembly
    std::vector<ClusterWall> langlands_side;  // direct dual-side formula
    bool equal = false;
    std::string orientation_note;
};

// Initial walls through the origin on both routes plus the structural
// equality report.
ClusterDiagramReport cluster_initial_diagram(const QuotientData& q);

// The same walls as a scattering diagram over one deformation label per
// wall, ready for completion.
ScatteringDiagram cluster_walls_to_diagram(const std::vector<ClusterWall>& walls, int order_cap);

}  // namespace walls

#endif
