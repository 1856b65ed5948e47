#ifndef WALLS_TROPICAL_HPP
#define WALLS_TROPICAL_HPP

#include <optional>
#include <vector>

#include "walls/broken.hpp"
#include "walls/lattice.hpp"

namespace walls {

// Rooted weighted tree in the plane. Edge directions point from the tail
// vertex `a` toward the head `b`, or to infinity when b < 0.
struct TropicalDisc {
    std::vector<RatPoint> vertices;
    int root = 0;

    struct Edge {
        int a = 0;
        int b = -1;  // -1: unbounded
        LatticeVector dir;
        long long weight = 1;
    };
    std::vector<Edge> edges;
    std::vector<RatPoint> constraints;

    std::vector<std::pair<LatticeVector, long long>> directions_away_from(int v) const;
    bool edge_contains(const Edge& e, const RatPoint& p) const;
};

bool check_balancing(const TropicalDisc& d);

// twice the sum of weights of unbounded edges
long long maslov_index(const TropicalDisc& d);

// |unbounded edges| - 2 |point constraints|, edges counted without weights
long long generalized_maslov(const TropicalDisc& d);

// product of |w1 v1 ^ w2 v2| over the trivalent non-root vertices
long long multiplicity(const TropicalDisc& d);

enum class ClipStatus { clipped, untouched };
struct ClipResult {
    TropicalDisc disc;
    ClipStatus status;
};

// Removes the unbounded edge through p together with its vertex and extends
// the surviving edge to infinity (it must have weight 1).
ClipResult clip(const TropicalDisc& d, const RatPoint& p, LatticeVector w1, LatticeVector w2);

// One term per fan ray with the run coefficient binom(m_v + 1, l_v) on the
// -2 chains; rejects the second Hirzebruch surface.
Potential semifano_toric_potential(const Fan& fan);

// Sequence of toric blowups from a Fano fan, each step staying semi-Fano.
struct BlowupChain {
    Fan fano;
    std::vector<LatticeVector> added_rays;     // in blowup order
    std::vector<RatPoint> constraint_points;   // one per blowup
    int degree_bound = 4;

    std::vector<Fan> fans() const;  // validates; throws NotSemiFanoChain
};

// Brute-force enumeration of the constrained tropical discs of weighted
// generalized Maslov index two with stop at u, aggregated by stop direction.
Potential bulk_potential_via_chain(const BlowupChain& chain, const RatPoint& u);

// lattice exponent -> coefficient, ignoring class labels
std::vector<std::pair<LatticeVector, Rat>> lattice_coefficients(const Potential& pot);

}  // namespace walls

#endif
