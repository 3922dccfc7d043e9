#pragma once

namespace hyqmom {

enum class BoundaryKind { Periodic, Extrapolation };

struct Mesh {
    int n_elem = 10;
    double x_low = -1.0;
    double x_high = 1.0;
    BoundaryKind boundary = BoundaryKind::Periodic;

    double dx() const { return (x_high - x_low) / n_elem; }
    double center(int i) const { return x_low + (i + 0.5) * dx(); }
    void validate() const;
};

}  // namespace hyqmom
