#pragma once

#include <vector>

namespace sshchain {

// Uniform sample grid: value(k) = start + k*step, k = 0..count-1.
struct UniformGrid {
    double start = 0.0;
    double step = 1.0;
    int count = 0;

    double value(int k) const { return start + step * static_cast<double>(k); }
    double front() const { return start; }
    double back() const { return value(count - 1); }
    double span() const { return step * static_cast<double>(count - 1); }

    std::vector<double> values() const
    {
        std::vector<double> v(static_cast<std::size_t>(count));
        for (int k = 0; k < count; ++k)
            v[static_cast<std::size_t>(k)] = value(k);
        return v;
    }
};

} // namespace sshchain
