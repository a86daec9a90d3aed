#include "rbsde/driver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rbsde {

DriverSpec DriverSpec::zero() { return {Kind::zero, {}, 0.0, 0.0}; }

DriverSpec DriverSpec::constant(double c) {
    return {Kind::constant, {c}, 0.0, 0.0};
}

DriverSpec DriverSpec::affine(double a, double b_y, double b_z, double b_k) {
    return {Kind::affine,
            {a, b_y, b_z, b_k},
            std::max(std::fabs(b_y), std::fabs(b_z)),
            std::fabs(b_k)};
}

DriverSpec DriverSpec::bounded_nonlinear(double scale) {
    return {Kind::bounded_nonlinear, {scale}, std::fabs(scale), std::fabs(scale)};
}

double DriverSpec::operator()(double, double y, double z, double k) const {
    switch (kind) {
        case Kind::zero:
            return 0.0;
        case Kind::constant:
            return params[0];
        case Kind::affine:
            return params[0] + params[1] * y + params[2] * z + params[3] * k;
        case Kind::bounded_nonlinear:
            return params[0] * std::tanh(y + z + k);
    }
    throw std::logic_error("DriverSpec: unknown kind");
}

void DriverSpec::validate() const {
    double need_yz = 0.0, need_k = 0.0;
    switch (kind) {
        case Kind::zero:
            if (!params.empty())
                throw std::invalid_argument("zero driver takes no parameters");
            break;
        case Kind::constant:
            if (params.size() != 1)
                throw std::invalid_argument("constant driver needs 1 parameter");
            break;
        case Kind::affine:
            if (params.size() != 4)
                throw std::invalid_argument("affine driver needs 4 parameters");
            need_yz = std::max(std::fabs(params[1]), std::fabs(params[2]));
            need_k = std::fabs(params[3]);
            break;
        case Kind::bounded_nonlinear:
            if (params.size() != 1)
                throw std::invalid_argument(
                    "bounded_nonlinear driver needs 1 parameter");
            need_yz = std::fabs(params[0]);
            need_k = std::fabs(params[0]);
            break;
    }
    if (lip_yz < need_yz || lip_k < need_k) {
        throw std::invalid_argument(
            "DriverSpec: declared Lipschitz constants do not dominate the "
            "catalog entry");
    }
}

bool DriverSpec::reflection_free() const {
    switch (kind) {
        case Kind::zero:
        case Kind::constant:
            return true;
        case Kind::affine:
            return params.size() == 4 && params[3] == 0.0;
        case Kind::bounded_nonlinear:
            return false;
    }
    return false;
}

TerminalSpec TerminalSpec::constant(double c) { return {Kind::constant, {c}}; }
TerminalSpec TerminalSpec::identity() { return {Kind::identity, {}}; }
TerminalSpec TerminalSpec::affine(double a, double b) {
    return {Kind::affine, {a, b}};
}
TerminalSpec TerminalSpec::clamp(double lo, double hi) {
    return {Kind::clamp, {lo, hi}};
}
TerminalSpec TerminalSpec::sinusoid(double a, double b, double c) {
    return {Kind::sinusoid, {a, b, c}};
}
TerminalSpec TerminalSpec::running_max(double a, double b) {
    return {Kind::running_max, {a, b}};
}

double TerminalSpec::eval(const PathTree& tree, std::size_t omega) const {
    const double w_t = tree.brownian(omega, tree.depth());
    switch (kind) {
        case Kind::constant:
            if (params.size() != 1)
                throw std::invalid_argument("constant terminal needs 1 parameter");
            return params[0];
        case Kind::identity:
            return w_t;
        case Kind::affine:
            if (params.size() != 2)
                throw std::invalid_argument("affine terminal needs 2 parameters");
            return params[0] + params[1] * w_t;
        case Kind::clamp:
            if (params.size() != 2)
                throw std::invalid_argument("clamp terminal needs 2 parameters");
            return std::min(std::max(w_t, params[0]), params[1]);
        case Kind::sinusoid:
            if (params.size() != 3)
                throw std::invalid_argument("sinusoid terminal needs 3 parameters");
            return params[0] + params[1] * std::sin(params[2] * w_t);
        case Kind::running_max: {
            if (params.size() != 2)
                throw std::invalid_argument(
                    "running_max terminal needs 2 parameters");
            double peak = 0.0;  // W_0 = 0
            for (int k = 1; k <= tree.depth(); ++k) {
                peak = std::max(peak, tree.brownian(omega, k));
            }
            return params[0] + params[1] * peak;
        }
    }
    throw std::logic_error("TerminalSpec: unknown kind");
}

}  // namespace rbsde
