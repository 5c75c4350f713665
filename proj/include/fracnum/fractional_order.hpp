#pragma once

#include <stdexcept>
#include <string>

namespace fracnum {

/// Fractional differentiation order restricted to the open interval (0, 1).
///
/// Every operator and solver in this library is defined for orders strictly
/// between zero and one; the integer endpoints correspond to classical
/// derivatives and are rejected at construction.
class FractionalOrder {
public:
    explicit FractionalOrder(double alpha) : alpha_(alpha) {
        if (!(alpha > 0.0 && alpha < 1.0)) {
            throw std::domain_error(
                "FractionalOrder: alpha must lie in (0, 1), got " + std::to_string(alpha));
        }
    }

    double value() const noexcept { return alpha_; }

private:
    double alpha_;
};

} // namespace fracnum
