#include "hyqmom/errors.hpp"

#include <sstream>

namespace hyqmom {

namespace {
std::string realizability_message(const std::string& functional, double value, const std::string& where) {
    std::ostringstream os;
    os << "nonrealizable state: " << functional << " = " << value;
    if (!where.empty()) os << " (" << where << ")";
    return os.str();
}
}  // namespace

RealizabilityError::RealizabilityError(const std::string& functional, double value, const std::string& where)
    : std::runtime_error(realizability_message(functional, value, where)), functional_(functional), value_(value) {}

}  // namespace hyqmom
