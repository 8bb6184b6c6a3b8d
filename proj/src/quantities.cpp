#include "droplet/quantities.hpp"

namespace droplet::quantities {

std::string Dimension::str() const {
    static constexpr const char* names[5] = {"L", "M", "T", "I", "Th"};
    std::string out;
    for (std::size_t i = 0; i < 5; ++i) {
        if (exp[i] == 0) continue;
        if (!out.empty()) out += ' ';
        out += names[i];
        out += '^';
        out += std::to_string(exp[i]);
    }
    return out.empty() ? std::string("1") : out;
}

void Quantity::require_same(const Quantity& o, const char* op) const {
    if (dimension != o.dimension) {
        throw std::domain_error(std::string("cannot ") + op + " quantities of dimension " +
                                dimension.str() + " and " + o.dimension.str());
    }
}

} // namespace droplet::quantities
