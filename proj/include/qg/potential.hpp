#ifndef QG_POTENTIAL_HPP
#define QG_POTENTIAL_HPP

#include <vector>

namespace qg {

/// Real-valued edge potential on [0, l]. All edges share the same one.
class Potential {
  public:
    enum class Kind { Zero, Polynomial, Table };

    Potential() = default;

    static Potential zero();
    static Potential polynomial(std::vector<double> coefficients);
    // Samples must strictly increase in x and cover [0, l]. Cubic spline
    // interpolation for 4+ samples, linear below that.
    static Potential table(std::vector<double> xs, std::vector<double> values);

    double operator()(double x) const;

    Kind kind() const { return kind_; }
    bool is_zero() const { return kind_ == Kind::Zero; }
    double domain_min() const;
    double domain_max() const;

    // Validates table coverage of [0, l]; throws ValidationError otherwise.
    void validate_for_length(double l) const;

  private:
    Kind kind_ = Kind::Zero;
    std::vector<double> coeffs_;
    std::vector<double> xs_, vs_;
    // natural cubic spline second derivatives at the knots
    std::vector<double> spline_m_;

    void build_spline();
};

}  // namespace qg

#endif
