// Serial vs OpenMP comparison on the two heavy kernels: completion sweeps
// over singular points and broken-line enumeration over source rays.
#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "walls/broken.hpp"

using namespace walls;

namespace {

double now() {
    using Clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(Clock::now().time_since_epoch()).count();
}

ToricModel cubic_model() {
    ToricModel m;
    m.fan = Fan({{1, 0}, {0, 1}, {-1, -1}}, true);
    m.divisor_areas = {Rat(300), Rat(300), Rat(300)};
    m.blowup_points.push_back({0, Rat(100), 1, "e11"});
    m.blowup_points.push_back({0, Rat(-101), 1, "e12"});
    m.blowup_points.push_back({1, Rat(-102), 1, "e21"});
    m.blowup_points.push_back({1, Rat(103), 1, "e22"});
    m.blowup_points.push_back({2, Rat(-104), 1, "e31"});
    m.blowup_points.push_back({2, Rat(105), 1, "e32"});
    return m;
}

ScatteringDiagram squares(int cap) {
    auto ctx = ClassContext::make({"s1", "s2"});
    ClassVec q1(2), q2(2);
    q1.e[0] = 1;
    q2.e[1] = 1;
    auto f1 = TruncatedSeries::one(ctx, cap);
    f1.add_term(Rat(1), {1, 0}, q1);
    auto f2 = TruncatedSeries::one(ctx, cap);
    f2.add_term(Rat(1), {0, 1}, q2);
    ScatteringDiagram d(ctx, cap);
    d.add_wall({{Rat(0), Rat(0)}, {1, 0}, true, f1.power(2)});
    d.add_wall({{Rat(0), Rat(0)}, {0, 1}, true, f2.power(2)});
    return d;
}

template <typename F>
double timed(F&& f) {
    double t0 = now();
    f();
    return now() - t0;
}

void row(const char* name, double serial, double parallel) {
    printf("%-34s %9.3fs %9.3fs %8.2fx\n", name, serial, parallel,
           parallel > 0 ? serial / parallel : 0.0);
}

}  // namespace

int main() {
#ifdef _OPENMP
    printf("openmp threads: %d\n", omp_get_max_threads());
#else
    printf("openmp: disabled at build time\n");
#endif
    printf("%-34s %10s %10s %9s\n", "kernel", "serial", "parallel", "speedup");

    {
        auto m = cubic_model();
        auto initial = blowup_initial_diagram(m, 7);
        ScatteringDiagram out_s, out_p;
        double s = timed([&] { out_s = complete(initial, 7, ExecMode::serial); });
        double p = timed([&] { out_p = complete(initial, 7, ExecMode::parallel); });
        row("cubic completion, order 7", s, p);
        if (out_s.str() != out_p.str()) {
            printf("MISMATCH between serial and parallel results\n");
            return 1;
        }
        RatPoint stop{Rat(-11, 3) + Rat(1, 97), Rat(-4, 3) + Rat(1, 89)};
        Potential ps, pp;
        double es = timed([&] { ps = potential(out_s, m, stop, ExecMode::serial); });
        double ep = timed([&] { pp = potential(out_s, m, stop, ExecMode::parallel); });
        row("cubic enumeration, order 7", es, ep);
        if (ps.str() != pp.str()) {
            printf("MISMATCH between serial and parallel results\n");
            return 1;
        }
    }
    {
        auto initial = squares(8);
        ScatteringDiagram out_s, out_p;
        double s = timed([&] { out_s = complete(initial, 8, ExecMode::serial); });
        double p = timed([&] { out_p = complete(initial, 8, ExecMode::parallel); });
        row("squares completion, order 8", s, p);
        if (out_s.str() != out_p.str()) {
            printf("MISMATCH between serial and parallel results\n");
            return 1;
        }
    }
    return 0;
}
