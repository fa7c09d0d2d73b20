#include "subthurston/potential.hpp"

#include <cmath>
#include <sstream>

namespace subthurston {

Potential Potential::constant(double c) {
    Potential p;
    p.kind_ = PotentialKind::Constant;
    p.constant_ = c;
    return p;
}

Potential Potential::torus_trig(std::vector<TrigTerm> terms, double constant) {
    for (const TrigTerm& t : terms)
        if (t.k < 0 || t.l < 0) throw ConfigError("torus_trig: frequencies must be >= 0");
    Potential p;
    p.kind_ = PotentialKind::TorusTrig;
    p.trig_ = std::move(terms);
    p.constant_ = constant;
    return p;
}

Potential Potential::coordinate_poly(std::vector<PolyTerm> terms, double constant) {
    for (const PolyTerm& t : terms)
        if (t.i < 0 || t.j < 0) throw ConfigError("coordinate_poly: exponents must be >= 0");
    Potential p;
    p.kind_ = PotentialKind::CoordinatePoly;
    p.poly_ = std::move(terms);
    p.constant_ = constant;
    return p;
}

Potential Potential::centered() const {
    Potential p = *this;
    p.constant_ = 0;
    return p;
}

Potential Potential::operator*(double scale) const {
    Potential p = *this;
    p.constant_ *= scale;
    p.face_bias_ *= scale;
    for (auto& t : p.trig_) t.coeff *= scale;
    for (auto& t : p.poly_) t.coeff *= scale;
    return p;
}

Potential Potential::operator+(const Potential& o) const {
    if (o.kind_ == PotentialKind::Constant) {
        Potential p = *this;
        p.constant_ += o.constant_;
        p.face_bias_ += o.face_bias_;
        return p;
    }
    if (kind_ == PotentialKind::Constant) return o + *this;
    if (kind_ != o.kind_)
        throw ConfigError("Potential: cannot add potentials of different families");
    Potential p = *this;
    p.constant_ += o.constant_;
    p.face_bias_ += o.face_bias_;
    p.trig_.insert(p.trig_.end(), o.trig_.begin(), o.trig_.end());
    p.poly_.insert(p.poly_.end(), o.poly_.begin(), o.poly_.end());
    return p;
}

HolderData Potential::holder_data() const {
    if (face_bias_ != 0)
        throw AssumptionViolation(
            "holder_data: face-biased potentials are discontinuous across the glued curve");
    HolderData h;
    h.alpha = alpha_;
    h.M = std::abs(constant_);
    switch (kind_) {
        case PotentialKind::Constant:
            break;
        case PotentialKind::TorusTrig:
            for (const TrigTerm& t : trig_) {
                h.H += std::abs(t.coeff) * kPi * (t.k + t.l);
                h.M += std::abs(t.coeff);
            }
            break;
        case PotentialKind::CoordinatePoly: {
            double hx = 0, hy = 0;
            for (const PolyTerm& t : poly_) {
                hx += std::abs(t.coeff) * t.i;
                hy += std::abs(t.coeff) * t.j;
                h.M += std::abs(t.coeff);
            }
            h.H = std::hypot(hx, hy);
            break;
        }
    }
    return h;
}

std::string Potential::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case PotentialKind::Constant: os << "constant(" << constant_ << ")"; break;
        case PotentialKind::TorusTrig:
            os << "torus_trig[";
            for (std::size_t i = 0; i < trig_.size(); ++i) {
                if (i) os << ", ";
                os << trig_[i].coeff << "*cos(" << trig_[i].k << "piX)cos(" << trig_[i].l
                   << "piY)";
            }
            os << "]";
            if (constant_ != 0) os << " + " << constant_;
            break;
        case PotentialKind::CoordinatePoly:
            os << "coordinate_poly[" << poly_.size() << " terms]";
            if (constant_ != 0) os << " + " << constant_;
            break;
    }
    if (face_bias_ != 0) os << " + " << face_bias_ << "*1_black";
    return os.str();
}

double birkhoff_sum(const PillowMap& map, const Potential& phi, const SplitPoint& p, int n) {
    if (n < 0) throw ConfigError("birkhoff_sum: n must be >= 0");
    double sum = 0;
    SplitPoint q = p;
    for (int j = 0; j < n; ++j) {
        sum += phi.eval(q);
        q = apply_map(map, q);
    }
    return sum;
}

}  // namespace subthurston
