#ifndef WALLS_DP5_HPP
#define WALLS_DP5_HPP

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "walls/broken.hpp"

namespace walls {

// Exact multivariate polynomial over a fixed named variable list.
class Poly {
  public:
    Poly() = default;
    explicit Poly(std::vector<std::string> vars) : vars_(std::move(vars)) {}
    static Poly var(const std::vector<std::string>& vars, const std::string& name);
    static Poly constant(const std::vector<std::string>& vars, const Rat& c);

    const std::vector<std::string>& vars() const { return vars_; }
    bool is_zero() const { return terms_.empty(); }
    void add(const Rat& c, std::vector<int> exp);

    friend Poly operator+(const Poly& a, const Poly& b);
    friend Poly operator-(const Poly& a, const Poly& b);
    friend Poly operator*(const Poly& a, const Poly& b);
    Poly operator-() const;
    friend bool operator==(const Poly& a, const Poly& b);
    Poly& operator+=(const Poly& o) { return *this = *this + o; }
    Poly& operator-=(const Poly& o) { return *this = *this - o; }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }

    Poly derivative(const std::string& name) const;
    Poly substitute(const std::string& name, const Poly& value) const;

    // coefficients in one variable, constant term first; entries are
    // polynomials in the remaining variables
    std::vector<Poly> coefficients_in(const std::string& name) const;

    std::complex<double> eval(const std::map<std::string, std::complex<double>>& point) const;
    std::string str() const;

  private:
    std::vector<std::string> vars_;
    std::map<std::vector<int>, Rat> terms_;
    int index_(const std::string& name) const;
};

struct Dp5Params {
    Rat a{2}, b{2}, c{5};
    Rat a1{1}, b1{1};    // blowup positions a', b'
    Rat a2{1}, b2{1};    // chart shifts a'', b'' (default to a', b')
    double t_numeric = 0.1;

    void validate() const;
};

// The dp5 toric model: the degree-7 base with non-toric points at (a',0)
// and (0,b'), wall labels eps1 / eps2.
ToricModel dp5_model(const Dp5Params& p);

enum class Dp5Chamber { central, up, right };
Potential dp5_potential(const Dp5Params& p, Dp5Chamber chamber, int order_cap, bool epsilon_zero);

// symbolic layer -------------------------------------------------------

// partials of W cleared by z1^2 z2 and z1 z2^2
Poly dp5_f();
Poly dp5_g();
// the quintic satisfied by lambda = z1 z2 - C (monic, constant term last)
Poly critical_quintic();
// the reference coefficient list the acceptance suite pins; inconsistent
// with the displayed partials (it corresponds to lambda = z1 z2 + 1)
Poly displayed_quintic();
// (lambda^2 - AB)^2 * gamma_2 after substituting the closed z(lambda) forms
Poly gamma2_cleared();

bool cubic_relation_check(int perturb_relation = 0, bool flip_sign = false);

// numeric layer --------------------------------------------------------

struct CriticalPoint {
    std::string chart;  // torus | immersed-1 | immersed-2 | non-geometric
    std::complex<double> z1, z2;
    std::complex<double> lambda;  // 0 on the z1 + z2 + 1 = 0 branch
    double val1 = 0, val2 = 0;    // two-point log-slope estimates
    double grad_residual = 0;     // relative residual of (f, g)
    double hessian_det = 0;       // relative |det| of the Hessian of W
    std::complex<double> critical_value{0, 0};
};

// 2 immersed-chart points + 5 quintic points; the z1 + z2 = 0 solution is
// returned separately flagged non-geometric.
std::vector<CriticalPoint> critical_points(const Dp5Params& p);

struct ValuationCase {
    int point_index;
    std::string label;  // i | ii | iii | iv | immersed-1 | immersed-2
    double predicted1, predicted2;
    double measured1, measured2;
    bool ok;  // within tolerance of the case formula
};
std::vector<ValuationCase> classify_valuations(const std::vector<CriticalPoint>& pts,
                                               const Dp5Params& p, double rel_tol = 0.02,
                                               bool strict = false);

struct NondegeneracyReport {
    bool gamma2_is_negative_quintic = false;
    double min_hessian_det = 0;
    // smallest pairwise distance of critical values, excluding the two
    // immersed-chart points whose values coincide at W = -1 - A - B in the
    // epsilon = 0 limit
    double min_value_gap = 0;
    bool immersed_values_equal = false;
    bool all_nondegenerate = false;
};
NondegeneracyReport verify_nondegeneracy(const std::vector<CriticalPoint>& pts, const Dp5Params& p);

}  // namespace walls

#endif
