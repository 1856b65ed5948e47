#include "walls/cluster.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

namespace walls {

namespace {

using Mat = std::vector<std::vector<long long>>;

Mat identity_mat(int n) {
    Mat m(n, std::vector<long long>(n, 0));
    for (int i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

// Smith reduction of A by row and column operations; callers only need the
// accumulated column matrix C (A -> A*C).
void smith_columns(Mat a, Mat& c_out) {
    int r = int(a.size());
    int n = r ? int(a[0].size()) : 0;
    Mat c = identity_mat(n);
    auto swap_cols = [&](int i, int j) {
        for (int k = 0; k < r; ++k) std::swap(a[k][i], a[k][j]);
        for (int k = 0; k < n; ++k) std::swap(c[k][i], c[k][j]);
    };
    auto add_col = [&](int dst, int src, long long f) {
        for (int k = 0; k < r; ++k) a[k][dst] += f * a[k][src];
        for (int k = 0; k < n; ++k) c[k][dst] += f * c[k][src];
    };
    auto add_row = [&](int dst, int src, long long f) {
        for (int k = 0; k < n; ++k) a[dst][k] += f * a[src][k];
    };
    int t = 0;
    for (int pr = 0; pr < r && t < n; ++pr) {
        int pi = -1, pj = -1;
        for (int i = pr; i < r && pi < 0; ++i)
            for (int j = t; j < n; ++j)
                if (a[i][j] != 0) {
                    pi = i;
                    pj = j;
                    break;
                }
        if (pi < 0) break;
        if (pi != pr)
            for (int k = 0; k < n; ++k) std::swap(a[pi][k], a[pr][k]);
        if (pj != t) swap_cols(pj, t);
        bool again = true;
        while (again) {
            again = false;
            for (int i = pr + 1; i < r; ++i) {
                if (a[i][t] == 0) continue;
                long long q = a[i][t] / a[pr][t];
                add_row(i, pr, -q);
                if (a[i][t] != 0) {
                    for (int k = 0; k < n; ++k) std::swap(a[i][k], a[pr][k]);
                    again = true;
                }
            }
            for (int j = t + 1; j < n; ++j) {
                if (a[pr][j] == 0) continue;
                long long q = a[pr][j] / a[pr][t];
                add_col(j, t, -q);
                if (a[pr][j] != 0) {
                    swap_cols(j, t);
                    again = true;
                }
            }
        }
        ++t;
    }
    c_out = std::move(c);
}

long long llgcd(long long a, long long b) { return std::gcd(a < 0 ? -a : a, b < 0 ? -b : b); }

}  // namespace

void FixedData::validate() const {
    if (n <= 0 || int(skew.size()) != n || int(d.size()) != n)
        throw Error("BadModel", "fixed data shape mismatch");
    long long g = 0;
    for (long long di : d) {
        if (di <= 0) throw Error("BadModel", "d-weights must be positive");
        g = llgcd(g, di);
    }
    if (g != 1) throw Error("BadModel", "d-weights must have gcd one");
    for (int i = 0; i < n; ++i) {
        if (int(skew[i].size()) != n) throw Error("BadModel", "skew matrix is not square");
        for (int j = 0; j < n; ++j) {
            if (!(skew[i][j] == -skew[j][i])) throw Error("BadModel", "form is not skew-symmetric");
            if (!(skew[i][j] * Rat(d[j])).is_integer() || !(skew[i][j] * Rat(d[i])).is_integer())
                throw Error("BadModel", "pairing of N with the diagonal sublattice is not integral");
        }
    }
}

Rat FixedData::pair(const std::vector<long long>& a, const std::vector<long long>& b) const {
    Rat s(0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s += Rat(a[i]) * skew[i][j] * Rat(b[j]);
    return s;
}

Seed identity_seed(int n) {
    Seed s;
    s.e.assign(n, std::vector<long long>(n, 0));
    for (int i = 0; i < n; ++i) s.e[i][i] = 1;
    return s;
}

long long Seed::det() const {
    Mat m = e;
    int n = int(m.size());
    long long det = 1;
    for (int c = 0; c < n; ++c) {
        int p = -1;
        for (int r = c; r < n; ++r)
            if (m[r][c] != 0) {
                p = r;
                break;
            }
        if (p < 0) return 0;
        if (p != c) {
            std::swap(m[p], m[c]);
            det = -det;
        }
        for (int r = c + 1; r < n; ++r) {
            while (m[r][c] != 0) {
                long long q = m[c][c] / m[r][c];
                for (int k = c; k < n; ++k) m[c][k] -= q * m[r][k];
                std::swap(m[c], m[r]);
                det = -det;
            }
        }
        det *= m[c][c];
    }
    return det;
}

std::vector<std::vector<long long>> epsilon_matrix(const FixedData& data, const Seed& s) {
    data.validate();
    int n = data.n;
    std::vector<std::vector<long long>> eps(n, std::vector<long long>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            Rat v = data.pair(s.e[i], s.e[k]) * Rat(data.d[k]);
            if (!v.is_integer()) throw Error("BadModel", "epsilon matrix is not integral");
            eps[i][k] = v.num();
        }
    return eps;
}

Seed mutate_seed(const FixedData& data, const Seed& s, int k) {
    if (k < 0 || k >= data.n) throw Error("BadModel", "mutation direction out of range");
    auto eps = epsilon_matrix(data, s);
    Seed out = s;
    for (int i = 0; i < data.n; ++i) {
        if (i == k) continue;
        long long c = std::max<long long>(eps[i][k], 0);
        for (int j = 0; j < data.n; ++j) out.e[i][j] += c * s.e[k][j];
    }
    for (int j = 0; j < data.n; ++j) out.e[k][j] = -s.e[k][j];
    return out;
}

MutationPullbacks mutation_pullbacks(const FixedData& data, const Seed& s, int k) {
    if (k < 0 || k >= data.n) throw Error("BadModel", "mutation direction out of range");
    data.validate();
    int n = data.n;
    MutationPullbacks out;
    out.x_side.exchange = s.e[k];
    out.x_side.functional.resize(n);
    for (int j = 0; j < n; ++j) {
        std::vector<long long> std_j(n, 0);
        std_j[j] = 1;
        Rat v = data.pair(std_j, s.e[k]) * Rat(data.d[k]);
        if (!v.is_integer()) throw Error("BadModel", "non-integral X-side exponent");
        out.x_side.functional[j] = v.num();
    }
    // v_k in the f-basis has coordinates d_j {e_k, e_j}
    out.a_side.exchange.resize(n);
    for (int j = 0; j < n; ++j) {
        Rat v = data.pair(s.e[k], s.e[j]) * Rat(data.d[j]);
        if (!v.is_integer()) throw Error("BadModel", "non-integral A-side exchange vector");
        out.a_side.exchange[j] = v.num();
    }
    // <d_k e_k, m> picks the k-th f-coordinate of m
    out.a_side.functional.assign(n, 0);
    out.a_side.functional[k] = 1;
    return out;
}

FixedData langlands_dual(const FixedData& data) {
    data.validate();
    long long D = 1;
    for (long long di : data.d) D = std::lcm(D, di);
    FixedData out;
    out.n = data.n;
    out.d.resize(data.n);
    out.skew.assign(data.n, std::vector<Rat>(data.n));
    for (int i = 0; i < data.n; ++i) {
        out.d[i] = D / data.d[i];
        for (int j = 0; j < data.n; ++j)
            out.skew[i][j] = Rat(data.d[i]) * Rat(data.d[j]) * data.skew[i][j] / Rat(D);
    }
    out.validate();
    return out;
}

QuotientData kernel_quotient(const FixedData& data, const Seed& s) {
    data.validate();
    long long sdet = s.det();
    if (sdet != 1 && sdet != -1) throw Error("BadModel", "seed basis is not unimodular");
    int n = data.n;
    std::vector<std::vector<Rat>> g(n, std::vector<Rat>(n));
    long long den = 1;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            g[i][j] = data.pair(s.e[i], s.e[j]);
            den = std::lcm(den, g[i][j].den());
        }
    Mat gi(n, std::vector<long long>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) gi[i][j] = (g[i][j] * Rat(den)).num();

    // rational kernel of the Gram matrix, fraction-free
    Mat a = gi;
    std::vector<int> pivot_of_row;
    std::vector<bool> col_used(n, false);
    int rank = 0;
    for (int col = 0; col < n && rank < n; ++col) {
        int p = -1;
        for (int r = rank; r < n; ++r)
            if (a[r][col] != 0) {
                p = r;
                break;
            }
        if (p < 0) continue;
        std::swap(a[p], a[rank]);
        for (int r = 0; r < n; ++r) {
            if (r == rank || a[r][col] == 0) continue;
            long long lp = a[rank][col], lr = a[r][col];
            long long gg = llgcd(lp, lr);
            long long fp = lr / gg, fr = lp / gg;
            for (int c = 0; c < n; ++c) a[r][c] = a[r][c] * fr - a[rank][c] * fp;
        }
        pivot_of_row.push_back(col);
        col_used[col] = true;
        ++rank;
    }
    if (rank != 2) throw Error("WrongRank", "skew form has rank " + std::to_string(rank));

    Mat kernel;
    for (int col = 0; col < n; ++col) {
        if (col_used[col]) continue;
        std::vector<Rat> v(n, Rat(0));
        v[col] = Rat(1);
        for (int r = rank - 1; r >= 0; --r) {
            int pc = pivot_of_row[r];
            Rat acc(0);
            for (int c = pc + 1; c < n; ++c) acc += Rat(a[r][c]) * v[c];
            v[pc] = -acc / Rat(a[r][pc]);
        }
        long long lcm = 1;
        for (auto& x : v) lcm = std::lcm(lcm, x.den());
        std::vector<long long> iv(n);
        long long gg = 0;
        for (int c = 0; c < n; ++c) {
            iv[c] = (v[c] * Rat(lcm)).num();
            gg = llgcd(gg, iv[c]);
        }
        if (gg > 1)
            for (auto& x : iv) x /= gg;
        kernel.push_back(std::move(iv));
    }
    int r = int(kernel.size());

    Mat C;
    if (r == 0) {
        C = identity_mat(n);
    } else {
        smith_columns(kernel, C);
    }
    auto project = [&](const std::vector<long long>& x_seed) {
        std::vector<long long> c(n, 0);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) c[j] += x_seed[i] * C[i][j];
        return LatticeVector{c[n - 2], c[n - 1]};
    };

    QuotientData q;
    for (int i = 0; i < n; ++i) {
        std::vector<long long> delta(n, 0);
        delta[i] = 1;
        LatticeVector eb = project(delta);
        q.e_bar.push_back(eb);
        q.de_bar.push_back(data.d[i] * eb);
    }
    for (int i = 0; i < n; ++i) {
        if (q.e_bar[i].is_zero()) throw Error("ParallelImages", "p* kills a seed vector");
        for (int j = i + 1; j < n; ++j)
            if (wedge(q.e_bar[i], q.e_bar[j]) == 0)
                throw Error("ParallelImages", "images of distinct seed vectors are parallel");
    }

    // lattice generated by the d_i e_bar_i, with tracked combinations
    {
        Mat gm(2, std::vector<long long>(n));
        for (int i = 0; i < n; ++i) {
            gm[0][i] = q.de_bar[i].x;
            gm[1][i] = q.de_bar[i].y;
        }
        Mat cc;
        smith_columns(gm, cc);
        Mat red(2, std::vector<long long>(n, 0));
        for (int rr = 0; rr < 2; ++rr)
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i) red[rr][j] += gm[rr][i] * cc[i][j];
        LatticeVector b1{red[0][0], red[1][0]};
        LatticeVector b2{red[0][1], red[1][1]};
        long long det = wedge(b1, b2);
        if (det == 0) throw Error("WrongRank", "quotient lattice degenerates");
        for (int i = 0; i < n; ++i) {
            long long x = wedge(q.de_bar[i], b2) / det;
            long long y = wedge(b1, q.de_bar[i]) / det;
            q.ind_de.push_back(llgcd(x, y));
            Rat vx(0), vy(0);
            for (int j = 0; j < n; ++j) {
                Rat gij = data.pair(s.e[i], s.e[j]);
                vx += Rat(cc[j][0]) * Rat(data.d[j]) * gij;
                vy += Rat(cc[j][1]) * Rat(data.d[j]) * gij;
            }
            if (!vx.is_integer() || !vy.is_integer())
                throw Error("BadModel", "v_bar is not integral on the quotient");
            q.v_bar.push_back({vx.num(), vy.num()});
            q.ind_v.push_back(llgcd(vx.num(), vy.num()));
        }
    }

    // descended form on the standard basis of N/K through preimages
    {
        std::vector<std::vector<Rat>> m(n, std::vector<Rat>(n)), inv(n, std::vector<Rat>(n, Rat(0)));
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) m[i][j] = Rat(C[i][j]);
            inv[i][i] = Rat(1);
        }
        for (int col = 0; col < n; ++col) {
            int p = -1;
            for (int rr = col; rr < n; ++rr)
                if (!m[rr][col].is_zero()) {
                    p = rr;
                    break;
                }
            std::swap(m[p], m[col]);
            std::swap(inv[p], inv[col]);
            Rat f = m[col][col];
            for (int c = 0; c < n; ++c) {
                m[col][c] /= f;
                inv[col][c] /= f;
            }
            for (int rr = 0; rr < n; ++rr) {
                if (rr == col || m[rr][col].is_zero()) continue;
                Rat g2 = m[rr][col];
                for (int c = 0; c < n; ++c) {
                    m[rr][c] -= g2 * m[col][c];
                    inv[rr][c] -= g2 * inv[col][c];
                }
            }
        }
        q.skew_bar.assign(2, std::vector<Rat>(2, Rat(0)));
        for (int ai = 0; ai < 2; ++ai)
            for (int bi = 0; bi < 2; ++bi) {
                Rat acc(0);
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j)
                        acc += inv[n - 2 + ai][i] * data.pair(s.e[i], s.e[j]) * inv[n - 2 + bi][j];
                q.skew_bar[ai][bi] = acc;
            }
    }
    return q;
}

ClusterDiagramReport cluster_initial_diagram(const QuotientData& q) {
    ClusterDiagramReport rep;
    size_t n = q.e_bar.size();
    for (size_t i = 0; i < n; ++i) {
        // blowup route: ind(d_i e_bar_i) is the orbifold multiplicity and
        // ind(v_bar_i) counts the blown-up points on the divisor; q_i is
        // primitive in the quotient lattice, not necessarily in Z^2
        long long r = q.ind_de[i];
        LatticeVector q_i{q.de_bar[i].x / r, q.de_bar[i].y / r};
        rep.blowup_side.push_back({r * q_i, q.ind_v[i]});
        rep.langlands_side.push_back({q.de_bar[i], q.ind_v[i]});
    }
    auto key = [](const ClusterWall& w) {
        return std::tuple<long long, long long, long long>(w.monomial.x, w.monomial.y, w.exponent);
    };
    auto a = rep.blowup_side;
    auto b = rep.langlands_side;
    auto cmp = [&](const ClusterWall& x, const ClusterWall& y) { return key(x) < key(y); };
    std::sort(a.begin(), a.end(), cmp);
    std::sort(b.begin(), b.end(), cmp);
    rep.equal = a.size() == b.size();
    for (size_t i = 0; rep.equal && i < a.size(); ++i)
        rep.equal = key(a[i]) == key(b[i]);
    rep.orientation_note =
        "initial walls in the blowup orientation; scattered rays flip sign between the two conventions";
    return rep;
}

ScatteringDiagram cluster_walls_to_diagram(const std::vector<ClusterWall>& walls, int order_cap) {
    std::vector<std::string> labels;
    for (size_t i = 0; i < walls.size(); ++i) labels.push_back("t" + std::to_string(i + 1));
    auto ctx = ClassContext::make(labels);
    ScatteringDiagram d(ctx, order_cap);
    for (size_t i = 0; i < walls.size(); ++i) {
        TruncatedSeries f = TruncatedSeries::one(ctx, order_cap);
        ClassVec q(ctx->size());
        q.e[i] = 1;
        f.add_term(Rat(1), walls[i].monomial, q);
        d.add_wall(
            {{Rat(0), Rat(0)}, primitive(walls[i].monomial).first, true, f.power(walls[i].exponent)});
    }
    return d;
}

}  // namespace walls
