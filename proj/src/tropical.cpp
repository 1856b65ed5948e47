#include "walls/tropical.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace walls {

namespace {

long long binom(long long n, long long k) {
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (long long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

std::vector<std::pair<LatticeVector, long long>> TropicalDisc::directions_away_from(int v) const {
    std::vector<std::pair<LatticeVector, long long>> out;
    for (const auto& e : edges) {
        if (e.a == v) out.push_back({e.dir, e.weight});
        if (e.b == v) out.push_back({-e.dir, e.weight});
    }
    return out;
}

bool TropicalDisc::edge_contains(const Edge& e, const RatPoint& p) const {
    RatPoint d = p - vertices[e.a];
    if (!cross(d, e.dir).is_zero()) return false;
    Rat t = (e.dir.x != 0) ? d.x / Rat(e.dir.x) : d.y / Rat(e.dir.y);
    if (t < Rat(0)) return false;
    if (e.b >= 0) {
        RatPoint full = vertices[e.b] - vertices[e.a];
        Rat tb = (e.dir.x != 0) ? full.x / Rat(e.dir.x) : full.y / Rat(e.dir.y);
        if (t > tb) return false;
    }
    return true;
}

bool check_balancing(const TropicalDisc& d) {
    for (int v = 0; v < int(d.vertices.size()); ++v) {
        if (v == d.root) continue;
        auto adj = d.directions_away_from(v);
        if (adj.empty()) continue;
        LatticeVector sum{0, 0};
        for (auto& [dir, w] : adj) sum = sum + w * dir;
        if (!sum.is_zero()) return false;
    }
    return true;
}

long long maslov_index(const TropicalDisc& d) {
    long long s = 0;
    for (const auto& e : d.edges)
        if (e.b < 0) s += e.weight;
    return 2 * s;
}

long long generalized_maslov(const TropicalDisc& d) {
    long long unbounded = 0;
    for (const auto& e : d.edges)
        if (e.b < 0) ++unbounded;
    return unbounded - 2 * (long long)d.constraints.size();
}

long long multiplicity(const TropicalDisc& d) {
    long long prod = 1;
    for (int v = 0; v < int(d.vertices.size()); ++v) {
        if (v == d.root) continue;
        auto adj = d.directions_away_from(v);
        if (adj.empty()) continue;
        if (adj.size() != 3)
            throw Error("NotTrivalent", "non-root vertex with valence " + std::to_string(adj.size()));
        prod *= std::llabs(wedge(adj[0].second * adj[0].first, adj[1].second * adj[1].first));
    }
    return prod;
}

ClipResult clip(const TropicalDisc& d, const RatPoint& p, LatticeVector w1, LatticeVector w2) {
    int through = -1;
    for (int i = 0; i < int(d.edges.size()); ++i)
        if (d.edge_contains(d.edges[i], p)) through = i;
    if (through < 0) return {d, ClipStatus::untouched};
    const auto& e = d.edges[through];
    if (e.b >= 0 || !(e.dir == -w1 || e.dir == -w2))
        throw Error("NotClippable", "edge through the point is not an unbounded -w_i edge");
    int v = e.a;
    std::vector<int> at_v;
    for (int i = 0; i < int(d.edges.size()); ++i)
        if (i != through && (d.edges[i].a == v || d.edges[i].b == v)) at_v.push_back(i);
    if (at_v.size() != 2) throw Error("NotClippable", "clipped vertex is not trivalent");
    int sibling = -1, survivor = -1;
    for (int i : at_v) (d.edges[i].b < 0 ? sibling : survivor) = i;
    if (sibling < 0 || survivor < 0)
        throw Error("NotClippable", "expected one unbounded sibling and one surviving edge");
    if (d.edges[survivor].weight != 1) throw Error("NotClippable", "surviving edge must have weight 1");

    TropicalDisc out;
    const auto& surv = d.edges[survivor];
    int other = surv.a == v ? surv.b : surv.a;
    if (other < 0) throw Error("NotClippable", "no surviving vertex");
    std::vector<int> remap(d.vertices.size(), -1);
    for (int i = 0; i < int(d.vertices.size()); ++i) {
        if (i == v) continue;
        remap[i] = int(out.vertices.size());
        out.vertices.push_back(d.vertices[i]);
    }
    out.root = remap[d.root];
    for (int i = 0; i < int(d.edges.size()); ++i) {
        if (i == through || i == sibling || i == survivor) continue;
        TropicalDisc::Edge ne = d.edges[i];
        ne.a = remap[ne.a];
        if (ne.b >= 0) ne.b = remap[ne.b];
        out.edges.push_back(ne);
    }
    TropicalDisc::Edge extended;
    extended.a = remap[other];
    extended.b = -1;
    extended.dir = surv.a == v ? -surv.dir : surv.dir;
    extended.weight = 1;
    out.edges.push_back(extended);
    for (const auto& c : d.constraints)
        if (!(c == p)) out.constraints.push_back(c);
    return {out, ClipStatus::clipped};
}

Potential semifano_toric_potential(const Fan& fan) {
    if (!fan.complete()) throw Error("BadModel", "potential needs a complete fan");
    size_t n = fan.size();
    std::vector<long long> selfint(n);
    for (size_t i = 0; i < n; ++i) {
        selfint[i] = fan.self_intersection(i);
        if (selfint[i] < -2) throw Error("NotSemiFano", "divisor with self-intersection below -2");
    }
    {
        std::multiset<long long> sig(selfint.begin(), selfint.end());
        if (n == 4 && sig == std::multiset<long long>{-2, 0, 0, 2})
            throw Error("ExcludedSurface", "the second Hirzebruch surface is excluded");
    }
    std::vector<long long> coeff(n, 1);
    std::vector<bool> seen(n, false);
    for (size_t i = 0; i < n; ++i) {
        if (selfint[i] != -2 || seen[i]) continue;
        size_t start = i;
        while (selfint[(start + n - 1) % n] == -2) {
            start = (start + n - 1) % n;
            if (start == i) break;
        }
        size_t m = 0;
        for (size_t j = start; selfint[j % n] == -2 && m < n; j = (j + 1) % n) ++m;
        for (size_t l = 1; l <= m; ++l) {
            size_t j = (start + l - 1) % n;
            coeff[j] = binom((long long)m + 1, (long long)l);
            seen[j] = true;
        }
    }
    std::vector<std::string> labels;
    ToricModel naming;
    naming.fan = fan;
    for (size_t i = 0; i < n; ++i) labels.push_back(naming.area_label(i));
    auto ctx = ClassContext::make(labels);
    TruncatedSeries s(ctx, 1);
    for (size_t i = 0; i < n; ++i) {
        ClassVec q(n);
        q.e[i] = 1;
        s.add_term(Rat(coeff[i]), fan[i], q);
    }
    return {std::move(s), "toric"};
}

std::vector<Fan> BlowupChain::fans() const {
    std::vector<Fan> out{fano};
    for (size_t i = 0; i < fano.size(); ++i)
        if (fano.self_intersection(i) < -1)
            throw Error("NotSemiFanoChain", "base surface is not Fano");
    for (const auto& r : added_rays) {
        const Fan& cur = out.back();
        bool corner = false;
        for (size_t i = 0; i < cur.size(); ++i)
            if (cur[i] + cur[(i + 1) % cur.size()] == r) corner = true;
        if (!corner) throw Error("NotSemiFanoChain", "added ray " + r.str() + " is not a corner sum");
        std::vector<LatticeVector> rays = cur.rays();
        rays.push_back(r);
        Fan next(rays, true);
        for (size_t i = 0; i < next.size(); ++i)
            if (next.self_intersection(i) < -2)
                throw Error("NotSemiFanoChain", "intermediate surface is not semi-Fano");
        out.push_back(std::move(next));
    }
    return out;
}

namespace {

struct DiscContribution {
    LatticeVector v;
    long long weight;
};

struct Oracle {
    const Fan& fan;
    const std::vector<RatPoint>& pts;
    RatPoint u;
    std::vector<DiscContribution> found;

    LatticeVector out_dir(size_t i) const { return -fan[i]; }

    static std::optional<RatPoint> line_intersect(const RatPoint& p, LatticeVector dp, const RatPoint& q,
                                                  LatticeVector dq) {
        long long det = wedge(dp, dq);
        if (det == 0) return std::nullopt;
        // p + t*dp with cross(p + t*dp - q, dq) = 0
        Rat t = cross(q - p, dq) / Rat(det);
        return RatPoint{p.x + t * Rat(dp.x), p.y + t * Rat(dp.y)};
    }

    bool on_ray(const RatPoint& from, LatticeVector dir, const RatPoint& p) const {
        RatPoint d = p - from;
        if (!cross(d, dir).is_zero()) return false;
        Rat t = (dir.x != 0) ? d.x / Rat(dir.x) : d.y / Rat(dir.y);
        return t > Rat(0);
    }

    bool on_segment(const RatPoint& a, const RatPoint& b, const RatPoint& p) const {
        RatPoint d = b - a;
        Rat cr = (p.x - a.x) * d.y - (p.y - a.y) * d.x;
        if (!cr.is_zero()) return false;
        Rat t = (!d.x.is_zero()) ? (p.x - a.x) / d.x : (p.y - a.y) / d.y;
        return t > Rat(0) && t < Rat(1);
    }

    void straight_discs() {
        for (size_t i = 0; i < fan.size(); ++i) {
            bool hit = false;
            for (const auto& p : pts)
                if (on_ray(u, out_dir(i), p)) hit = true;
            if (!hit) found.push_back({fan[i], 1});
            // a weight-two ray through exactly one marked point also has index two
            for (size_t a = 0; a < pts.size(); ++a) {
                if (!on_ray(u, out_dir(i), pts[a])) continue;
                bool others_clear = true;
                for (size_t b = 0; b < pts.size(); ++b)
                    if (b != a && on_ray(u, out_dir(i), pts[b])) others_clear = false;
                if (others_clear) found.push_back({2 * fan[i], 1});
            }
        }
    }

    void one_vertex_discs() {
        for (size_t a = 0; a < pts.size(); ++a) {
            for (size_t i = 0; i < fan.size(); ++i) {
                for (size_t j = 0; j < fan.size(); ++j) {
                    if (i == j) continue;
                    long long mult = std::llabs(wedge(fan[i], fan[j]));
                    if (mult == 0) continue;
                    LatticeVector V = fan[i] + fan[j];
                    if (V.is_zero()) continue;
                    auto vtx = line_intersect(pts[a], fan[i], u, V);  // marked point on the i-edge
                    if (!vtx) continue;
                    if (!on_ray(*vtx, out_dir(i), pts[a])) continue;
                    if (!on_ray(*vtx, V, u)) continue;
                    bool clean = true;
                    for (size_t b = 0; b < pts.size() && clean; ++b) {
                        if (b == a) continue;
                        if (on_ray(*vtx, out_dir(i), pts[b]) || on_ray(*vtx, out_dir(j), pts[b]) ||
                            on_segment(*vtx, u, pts[b]))
                            clean = false;
                    }
                    if (clean) found.push_back({V, mult});
                }
            }
        }
    }

    void one_vertex_two_points() {
        if (pts.size() < 2) return;
        for (size_t a = 0; a < pts.size(); ++a)
            for (size_t b = 0; b < pts.size(); ++b) {
                if (a == b) continue;
                for (size_t i = 0; i < fan.size(); ++i)
                    for (size_t j = 0; j < fan.size(); ++j) {
                        if (i == j) continue;
                        for (long long wi = 1; wi <= 2; ++wi) {
                            long long wj = 3 - wi;
                            LatticeVector V = wi * fan[i] + wj * fan[j];
                            if (V.is_zero()) continue;
                            long long mult = std::llabs(wedge(wi * fan[i], wj * fan[j]));
                            if (mult == 0) continue;
                            auto vtx = line_intersect(pts[a], fan[i], pts[b], fan[j]);
                            if (!vtx) continue;
                            if (!cross(u - *vtx, V).is_zero()) continue;  // overdetermined
                            if (!on_ray(*vtx, out_dir(i), pts[a])) continue;
                            if (!on_ray(*vtx, out_dir(j), pts[b])) continue;
                            if (!on_ray(*vtx, V, u)) continue;
                            found.push_back({V, mult});
                        }
                    }
            }
    }

    void two_vertex_discs() {
        if (pts.size() != 2) return;
        size_t n = fan.size();
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i; j < n; ++j)
                for (size_t k = 0; k < n; ++k) {
                    long long m1 = std::llabs(wedge(fan[i], fan[j]));
                    if (m1 == 0) continue;
                    LatticeVector V1 = fan[i] + fan[j];
                    if (V1.is_zero()) continue;
                    LatticeVector df = primitive(V1).first;
                    LatticeVector V2 = V1 + fan[k];
                    if (V2.is_zero()) continue;
                    long long m2 = std::llabs(wedge(V1, fan[k]));
                    if (m2 == 0) continue;
                    for (int pa = 0; pa < 5; ++pa)
                        for (int pb = 0; pb < 5; ++pb) {
                            if (pa == pb) continue;
                            solve_two_vertex(i, j, k, V1, df, V2, m1 * m2, pa, pb);
                        }
                }
    }

    // unknowns v1.x, v1.y, s with v2 = v1 + s*df; edge slots:
    // 0 = e_i, 1 = e_j (at v1), 2 = e_k (at v2), 3 = internal, 4 = stop
    void solve_two_vertex(size_t i, size_t j, size_t k, LatticeVector V1, LatticeVector df,
                          LatticeVector V2, long long weight, int pa, int pb) {
        (void)V1;
        Rat A[3][4];
        auto fill = [&](int row, const RatPoint& p, LatticeVector d, bool at_v2) {
            // cross(p - v1 - [at_v2] s*df, d) = 0, expanded in (v1x, v1y, s)
            A[row][0] = Rat(-d.y);
            A[row][1] = Rat(d.x);
            A[row][2] = at_v2 ? Rat(-wedge(df, d)) : Rat(0);
            A[row][3] = -cross(p, d);
        };
        auto fill_point = [&](int row, int slot, const RatPoint& p) {
            switch (slot) {
                case 0: fill(row, p, fan[i], false); break;
                case 1: fill(row, p, fan[j], false); break;
                case 2: fill(row, p, fan[k], true); break;
                case 3: fill(row, p, df, false); break;
                default: fill(row, p, V2, true); break;
            }
        };
        fill(0, u, V2, true);
        fill_point(1, pa, pts[0]);
        fill_point(2, pb, pts[1]);
        int row = 0;
        int pivot_col[3] = {-1, -1, -1};
        for (int col = 0; col < 3 && row < 3; ++col) {
            int piv = -1;
            for (int r = row; r < 3; ++r)
                if (!A[r][col].is_zero()) {
                    piv = r;
                    break;
                }
            if (piv < 0) continue;
            for (int c = 0; c < 4; ++c) std::swap(A[piv][c], A[row][c]);
            for (int r = 0; r < 3; ++r) {
                if (r == row || A[r][col].is_zero()) continue;
                Rat f = A[r][col] / A[row][col];
                for (int c = col; c < 4; ++c) A[r][c] -= f * A[row][c];
            }
            pivot_col[row] = col;
            ++row;
        }
        if (row < 3) return;  // singular placement
        Rat sol[3];
        for (int r = 2; r >= 0; --r) {
            int c = pivot_col[r];
            Rat v = A[r][3];
            for (int cc = c + 1; cc < 3; ++cc) v -= A[r][cc] * sol[cc];
            sol[c] = v / A[r][c];
        }
        RatPoint v1{sol[0], sol[1]};
        Rat s = sol[2];
        if (!(s > Rat(0))) return;
        RatPoint v2{v1.x + s * Rat(df.x), v1.y + s * Rat(df.y)};
        if (!on_ray(v2, V2, u)) return;
        auto pt_on_slot = [&](int slot, const RatPoint& p) {
            switch (slot) {
                case 0: return on_ray(v1, out_dir(i), p);
                case 1: return on_ray(v1, out_dir(j), p);
                case 2: return on_ray(v2, out_dir(k), p);
                case 3: return on_segment(v1, v2, p);
                default: return on_segment(v2, u, p);
            }
        };
        if (!pt_on_slot(pa, pts[0]) || !pt_on_slot(pb, pts[1])) return;
        found.push_back({V2, weight});
    }
};

}  // namespace

Potential bulk_potential_via_chain(const BlowupChain& chain, const RatPoint& u) {
    auto fans = chain.fans();
    (void)fans;
    if (chain.constraint_points.size() != chain.added_rays.size())
        throw Error("BadModel", "one constraint point per blowup required");
    size_t n = chain.constraint_points.size();
    if (n > 2) throw Error("BadModel", "the disc oracle supports at most two constraint points");
    if ((long long)n + 1 > chain.degree_bound)
        throw Error("BadModel", "degree bound below the index-two disc degree");
    Oracle o{chain.fano, chain.constraint_points, u, {}};
    o.straight_discs();
    o.one_vertex_discs();
    o.one_vertex_two_points();
    o.two_vertex_discs();

    auto ctx = ClassContext::make({});
    TruncatedSeries s(ctx, 0);
    for (const auto& d : o.found) s.add_term(Rat(d.weight), d.v, ClassVec(0));
    return {std::move(s), "bulk"};
}

std::vector<std::pair<LatticeVector, Rat>> lattice_coefficients(const Potential& pot) {
    std::map<LatticeVector, Rat> acc;
    pot.series.for_each([&](const Rat& c, LatticeVector m, const ClassVec&) { acc[m] += c; });
    std::vector<std::pair<LatticeVector, Rat>> out;
    for (const auto& [m, c] : acc)
        if (!c.is_zero()) out.push_back({m, c});
    return out;
}

}  // namespace walls
