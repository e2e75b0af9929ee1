#pragma once

#include <stdexcept>
#include <string>

namespace tango {

// The parameter tuple (n, gamma, alpha, beta) behind the weighted
// quotient and Tango bundles. Global constraints: n > 2, gamma > 0,
// alpha >= beta, alpha + beta >= 0. The geometric construction further
// wants every defining form to have positive degree,
//   gamma + n*alpha + i*(beta - alpha) > 0 for 0 <= i <= n,
// which valid() includes and the sweep filters use; the dimension
// calculus itself is well defined without it, so the builders only
// enforce the global constraints.
struct TangoParams {
    int n = 3;
    long gamma = 1;
    long alpha = 0;
    long beta = 0;

    bool formally_valid() const {
        return n > 2 && gamma > 0 && alpha >= beta && alpha + beta >= 0;
    }

    bool valid() const {
        if (!formally_valid()) return false;
        for (int i = 0; i <= n; ++i)
            if (gamma + static_cast<long>(n) * alpha + i * (beta - alpha) <= 0)
                return false;
        return true;
    }

    void require_valid() const {
        if (!formally_valid())
            throw std::invalid_argument("TangoParams: constraints violated (n=" +
                                        std::to_string(n) + ", gamma=" + std::to_string(gamma) +
                                        ", alpha=" + std::to_string(alpha) +
                                        ", beta=" + std::to_string(beta) + ")");
    }

    bool operator==(const TangoParams&) const = default;
};

} // namespace tango
