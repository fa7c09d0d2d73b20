#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "subthurston/geometry.hpp"

namespace subthurston {

enum class PotentialKind { Constant, TorusTrig, CoordinatePoly };

// coeff * cos(pi*k*X) * cos(pi*l*Y) in torus coordinates. Even in both
// variables and 2-periodic, hence well defined on the pillow; note
// cos(pi*l*(2-y)) = cos(pi*l*y), so the chart formula is face independent.
struct TrigTerm {
    int k = 0, l = 0;
    double coeff = 0;
};

// coeff * x^i * y^j in face chart coordinates, the same formula on both
// faces (the gluing is the chart identity on the boundary, so this is
// continuous on the sphere, though in general only Lipschitz across it).
struct PolyTerm {
    int i = 0, j = 0;
    double coeff = 0;
};

struct HolderData {
    double alpha = 1;  // exponent
    double H = 0;      // seminorm bound
    double M = 0;      // sup bound
};

class Potential {
  public:
    static Potential constant(double c);
    static Potential torus_trig(std::vector<TrigTerm> terms, double constant = 0);
    static Potential coordinate_poly(std::vector<PolyTerm> terms, double constant = 0);

    // Adds beta * 1_{black face}. Breaks continuity across the glued curve;
    // operations that need a global Hoelder bound refuse such potentials.
    Potential& with_face_bias(double beta) {
        face_bias_ = beta;
        return *this;
    }

    PotentialKind kind() const { return kind_; }
    double constant_part() const { return constant_; }
    bool is_constant() const {
        return kind_ == PotentialKind::Constant && face_bias_ == 0;
    }
    bool has_face_bias() const { return face_bias_ != 0; }
    double face_bias() const { return face_bias_; }
    const std::vector<TrigTerm>& trig_terms() const { return trig_; }
    const std::vector<PolyTerm>& poly_terms() const { return poly_; }

    // Same potential with the constant part removed (it factors out of all
    // operator sums exactly).
    Potential centered() const;
    Potential operator*(double scale) const;
    Potential operator+(const Potential& o) const;  // kinds must agree or one be constant

    double eval(Colour face, double x, double y) const {
        double v = constant_;
        if (face_bias_ != 0 && face == Colour::Black) v += face_bias_;
        switch (kind_) {
            case PotentialKind::Constant: break;
            case PotentialKind::TorusTrig:
                for (const TrigTerm& t : trig_)
                    v += t.coeff * std::cos(kPi * t.k * x) * std::cos(kPi * t.l * y);
                break;
            case PotentialKind::CoordinatePoly:
                for (const PolyTerm& t : poly_) {
                    double p = t.coeff;
                    for (int a = 0; a < t.i; ++a) p *= x;
                    for (int b = 0; b < t.j; ++b) p *= y;
                    v += p;
                }
                break;
        }
        return v;
    }
    double eval(const SplitPoint& p) const {
        return eval(p.face, static_cast<double>(p.x), static_cast<double>(p.y));
    }
    double eval(const FixedPoint& p) const { return eval(p.face, p.xd(), p.yd()); }

    // Analytic (alpha, H, M) for the pillow path metric; throws
    // AssumptionViolation for face-biased potentials, which are not
    // globally Hoelder.
    HolderData holder_data() const;

    std::string describe() const;

  private:
    static constexpr double kPi = 3.14159265358979323846;
    PotentialKind kind_ = PotentialKind::Constant;
    double constant_ = 0;
    double face_bias_ = 0;
    double alpha_ = 1;
    std::vector<TrigTerm> trig_;
    std::vector<PolyTerm> poly_;
};

// Sum of phi over the exact orbit p, F(p), ..., F^{n-1}(p); zero when n = 0.
double birkhoff_sum(const PillowMap& map, const Potential& phi, const SplitPoint& p, int n);

}  // namespace subthurston
