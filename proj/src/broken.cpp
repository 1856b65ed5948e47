#include "walls/broken.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace walls {

namespace {

struct MonoKey {
    LatticeVector m;
    ClassVec q;
    friend bool operator<(const MonoKey& a, const MonoKey& b) {
        if (!(a.m == b.m)) return a.m < b.m;
        return a.q < b.q;
    }
    friend bool operator==(const MonoKey& a, const MonoKey& b) { return a.m == b.m && a.q == b.q; }
};

// primitive normal of d with positive pairing against m
LatticeVector oriented_normal(LatticeVector d, LatticeVector m) {
    LatticeVector n = rot90(d);
    long long s = dot(n, m);
    if (s == 0) throw Error("TangentCrossing", "travel direction parallel to wall");
    return s > 0 ? n : -n;
}

struct Enumerator {
    const ScatteringDiagram& diag;
    const ToricModel& model;
    RatPoint u;
    int source_ray;
    ContextPtr ctx;
    int cap;
    MonoKey source_mono;
    std::vector<BrokenLine> out;

    Enumerator(const ScatteringDiagram& d, const ToricModel& mdl, RatPoint stop, int ray)
        : diag(d), model(mdl), u(stop), source_ray(ray), ctx(d.context()), cap(d.order_cap()) {
        ClassVec q0(ctx->size());
        q0.e[ctx->index_of(model.area_label(ray))] = 1;
        source_mono = {model.fan[ray], q0};
    }

    // forward closure of monomials reachable from the source by bending
    std::vector<MonoKey> closure() const {
        std::set<MonoKey> seen{source_mono};
        std::vector<MonoKey> queue{source_mono};
        for (size_t head = 0; head < queue.size(); ++head) {
            MonoKey cur = queue[head];
            for (const auto& w : diag.walls()) {
                if (wedge(w.dir, cur.m) == 0) continue;  // tangent travel never bends
                LatticeVector n0 = oriented_normal(w.dir, cur.m);
                long long p = dot(n0, cur.m);
                TruncatedSeries fp = w.f.power(p);
                fp.for_each([&](const Rat&, LatticeVector L, const ClassVec& dq) {
                    if (L.is_zero() && dq.is_zero()) return;
                    MonoKey nxt{cur.m + L, cur.q + dq};
                    if (nxt.m.is_zero()) return;
                    if (nxt.q.order(*ctx) > cap) return;
                    if (seen.insert(nxt).second) queue.push_back(nxt);
                });
            }
        }
        return queue;
    }

    struct Crossing {
        Rat t;
        RatPoint at;
        std::vector<size_t> walls;
    };

    // transverse crossings of the backward ray from - t*m, t > 0
    std::vector<Crossing> crossings(const RatPoint& from, LatticeVector m) const {
        std::map<Rat, Crossing> by_t;
        for (size_t i = 0; i < diag.walls().size(); ++i) {
            const Wall& w = diag.walls()[i];
            long long den = wedge(m, w.dir);
            Rat num = cross(from - w.base, w.dir);
            if (den == 0) {
                if (num.is_zero())
                    throw Error("DegenerateArrangement", "broken line segment runs inside a wall");
                continue;
            }
            // from - t*m on the support line: cross(from - base, dir) = t * wedge(m, dir)
            Rat t = num / Rat(den);
            if (!(t > Rat(0))) continue;
            RatPoint at{from.x - t * Rat(m.x), from.y - t * Rat(m.y)};
            if (!w.contains(at)) continue;
            auto [it, fresh] = by_t.try_emplace(t, Crossing{t, at, {}});
            (void)fresh;
            it->second.walls.push_back(i);
        }
        std::vector<Crossing> out_c;
        out_c.reserve(by_t.size());
        for (auto& [t, c] : by_t) out_c.push_back(std::move(c));
        return out_c;
    }

    bool point_in_sing(const RatPoint& p, LatticeVector line_dir) const {
        for (const auto& w : diag.walls())
            if (wedge(w.dir, line_dir) != 0 && w.contains(p)) return true;
        return false;
    }

    void walk(const RatPoint& from, const MonoKey& mono, std::vector<BrokenLine::Bend>& bends,
              const MonoKey& final_mono) {
        if (mono == source_mono) {
            BrokenLine bl;
            bl.source_ray = source_ray;
            bl.bends.assign(bends.rbegin(), bends.rend());  // from infinity toward the stop
            bl.coeff = Rat(1);
            for (const auto& b : bl.bends) bl.coeff *= b.factor;
            bl.final_m = final_mono.m;
            bl.final_q = final_mono.q;
            out.push_back(std::move(bl));
            return;  // no class budget remains for further bends
        }
        for (const auto& c : crossings(from, mono.m)) {
            LatticeVector d0 = diag.walls()[c.walls.front()].dir;
            bool parallel_group = true;
            for (size_t wi : c.walls)
                if (wedge(diag.walls()[wi].dir, d0) != 0) parallel_group = false;
            if (!parallel_group) continue;          // crossing inside Sing: pass, never bend
            if (point_in_sing(c.at, d0)) continue;  // another wall makes this point singular
            LatticeVector n0 = oriented_normal(d0, mono.m);
            long long p = dot(n0, mono.m);
            TruncatedSeries F = TruncatedSeries::one(ctx, cap);
            for (size_t wi : c.walls) F *= diag.walls()[wi].f.power(p);
            F.for_each([&](const Rat& cf, LatticeVector L, const ClassVec& dq) {
                if (L.is_zero() && dq.is_zero()) return;
                MonoKey pre{mono.m - L, mono.q - dq};
                if (!pre.q.nonnegative() || pre.m.is_zero()) return;
                BrokenLine::Bend bend;
                bend.at = c.at;
                bend.wall_dir = d0;
                bend.pre_m = pre.m;
                bend.pre_q = pre.q;
                bend.post_m = mono.m;
                bend.post_q = mono.q;
                bend.factor = cf;
                bends.push_back(bend);
                walk(c.at, pre, bends, final_mono);
                bends.pop_back();
            });
        }
    }

    std::vector<BrokenLine> run(ExecMode mode) {
        for (const auto& w : diag.walls())
            if (w.contains(u)) throw Error("StopOnWall", "stop point lies on a wall");
        auto targets = closure();
        std::vector<std::vector<BrokenLine>> buckets(targets.size());
        auto job = [&](size_t i) {
            Enumerator local(diag, model, u, source_ray);
            std::vector<BrokenLine::Bend> bends;
            local.walk(u, targets[i], bends, targets[i]);
            buckets[i] = std::move(local.out);
        };
        if (mode == ExecMode::parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
            for (long long i = 0; i < (long long)targets.size(); ++i) job(size_t(i));
        } else {
            for (size_t i = 0; i < targets.size(); ++i) job(i);
        }
        for (auto& b : buckets)
            for (auto& bl : b) out.push_back(std::move(bl));
        std::sort(out.begin(), out.end(), [](const BrokenLine& a, const BrokenLine& b) {
            if (!(a.final_m == b.final_m)) return a.final_m < b.final_m;
            if (!(a.final_q == b.final_q)) return a.final_q < b.final_q;
            return a.bends.size() < b.bends.size();
        });
        return std::move(out);
    }
};

}  // namespace

std::string BrokenLine::str(const ClassContext& ctx) const {
    std::ostringstream os;
    os << "source_ray=" << source_ray << " bends=[";
    for (size_t i = 0; i < bends.size(); ++i) {
        if (i) os << ", ";
        os << bends[i].at.str() << "@" << bends[i].wall_dir.str();
    }
    os << "] final=" << format_monomial(ctx, coeff, final_m, final_q);
    return os.str();
}

std::string Potential::str() const { return "chamber " + chamber_id + "\n" + series.str(); }

int Potential::lattice_term_count() const {
    std::set<LatticeVector> ms;
    series.for_each([&](const Rat&, LatticeVector m, const ClassVec&) { ms.insert(m); });
    return int(ms.size());
}

std::string chamber_id(const ScatteringDiagram& diagram, const RatPoint& u) {
    std::string id;
    for (const auto& w : diagram.walls()) {
        Rat s = cross(u - w.base, w.dir);
        id += s > Rat(0) ? '+' : (s < Rat(0) ? '-' : '0');
    }
    return id;
}

std::vector<BrokenLine> enumerate_broken_lines(const ScatteringDiagram& diagram, const ToricModel& model,
                                               const RatPoint& u, int source_ray, ExecMode mode) {
    if (source_ray < 0 || size_t(source_ray) >= model.fan.size())
        throw Error("BadModel", "source ray index out of range");
    Enumerator e(diagram, model, u, source_ray);
    return e.run(mode);
}

Potential potential(const ScatteringDiagram& diagram, const ToricModel& model, const RatPoint& u,
                    ExecMode mode) {
    auto ctx = diagram.context();
    int cap = diagram.order_cap();
    size_t n = model.fan.size();
    std::vector<TruncatedSeries> theta(n, TruncatedSeries(ctx, cap));
    auto job = [&](size_t ray, ExecMode inner) {
        TruncatedSeries acc(ctx, cap);
        for (const auto& bl : enumerate_broken_lines(diagram, model, u, int(ray), inner))
            acc.add_term(bl.coeff, bl.final_m, bl.final_q);
        for (const auto& su : model.sphere_units) {
            if (size_t(su.ray_index) != ray) continue;
            TruncatedSeries unit = TruncatedSeries::one(ctx, cap);
            ClassVec q(ctx->size());
            for (const auto& l : su.labels) q.e[ctx->index_of(l)] += 1;
            unit.add_term(Rat(1), {0, 0}, q);
            acc *= unit;
        }
        theta[ray] = std::move(acc);
    };
    for (size_t i = 0; i < n; ++i) job(i, mode);
    Potential pot{TruncatedSeries(ctx, cap), chamber_id(diagram, u)};
    for (auto& t : theta) pot.series += t;
    return pot;
}

Potential blowdown_filter(const Potential& pot, const std::vector<std::string>& exceptional_labels) {
    auto ctx = pot.series.context();
    std::vector<int> idx;
    for (const auto& l : exceptional_labels) idx.push_back(ctx->index_of(l));
    TruncatedSeries kept(ctx, pot.series.cap());
    pot.series.for_each([&](const Rat& c, LatticeVector m, const ClassVec& q) {
        for (int i : idx)
            if (q.e[i] != 0) return;
        kept.add_term(c, m, q);
    });
    return {kept.collapse_labels(exceptional_labels), pot.chamber_id};
}

BrokenLineCount count_broken_lines(const ToricModel& model, const RatPoint& u, int order_cap,
                                   ExecMode mode) {
    auto initial = blowup_initial_diagram(model, order_cap);
    auto full = complete(initial, order_cap, mode);
    BrokenLineCount c;
    std::set<LatticeVector> ms;
    for (size_t ray = 0; ray < model.fan.size(); ++ray) {
        auto lines = enumerate_broken_lines(full, model, u, int(ray), mode);
        c.lines += int(lines.size());
        for (const auto& bl : lines) ms.insert(bl.final_m);
    }
    c.lattice_terms = int(ms.size());
    return c;
}

}  // namespace walls
