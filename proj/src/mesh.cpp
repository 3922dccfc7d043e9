#include "hyqmom/mesh.hpp"

#include <stdexcept>

namespace hyqmom {

void Mesh::validate() const {
    if (n_elem < 1) throw std::invalid_argument("mesh needs at least one element");
    if (!(x_high > x_low)) throw std::invalid_argument("mesh bounds must satisfy x_low < x_high");
}

}  // namespace hyqmom
