#pragma once

#include <cstddef>
#include <vector>

namespace nilm {

// Dense (batch, channels, length) buffer of doubles, channel rows contiguous.
struct Tensor {
    int batch = 0;
    int channels = 0;
    int length = 0;
    std::vector<double> data;

    Tensor() = default;
    Tensor(int b, int c, int l) { resize(b, c, l); }

    void resize(int b, int c, int l) {
        batch = b;
        channels = c;
        length = l;
        data.assign(static_cast<std::size_t>(b) * c * l, 0.0);
    }

    void zero() { std::fill(data.begin(), data.end(), 0.0); }

    std::size_t size() const { return data.size(); }

    double* row(int b, int c) {
        return data.data() + (static_cast<std::size_t>(b) * channels + c) * length;
    }
    const double* row(int b, int c) const {
        return data.data() + (static_cast<std::size_t>(b) * channels + c) * length;
    }

    double& at(int b, int c, int t) { return row(b, c)[t]; }
    double at(int b, int c, int t) const { return row(b, c)[t]; }
};

}  // namespace nilm
