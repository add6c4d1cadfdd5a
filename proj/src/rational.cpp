#include "cf/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace cf {

std::string to_string(const Q& q) {
    Q c = q;
    c.canonicalize();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

Q parse_rational(const std::string& s) {
    Q q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
    q.canonicalize();
    return q;
}

Q exact(double d) {
    if (!std::isfinite(d)) throw std::invalid_argument("non-finite value");
    return Q(d);
}

}  // namespace cf
