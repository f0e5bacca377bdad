#include "rhoext/grading.hpp"

#include <cctype>
#include <stdexcept>

namespace rhoext {

namespace {

// Parses "<prefix><decimal index>"; returns -1 if name does not match.
int indexed(const std::string& name, const std::string& prefix) {
    if (name.size() <= prefix.size() || name.compare(0, prefix.size(), prefix) != 0)
        return -1;
    int value = 0;
    for (size_t i = prefix.size(); i < name.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(name[i]))) return -1;
        value = value * 10 + (name[i] - '0');
        if (value > 62) throw std::invalid_argument("generator index too large: " + name);
    }
    return value;
}

int pow2(int n) { return 1 << n; }

}  // namespace

MultiDegree degree_of_generator(const std::string& name) {
    if (name == "a_sigma") return {RODegree{0, -1}, 0, 1, 0};
    if (name == "u_sigma") return {RODegree{1, -1}, 0, 0, 0};
    if (name == "w") return {RODegree{0, 0}, 0, 0, 0};
    if (name == "e0") return {RODegree{1, 0}, 0, 0, 0};
    if (int i = indexed(name, "v"); i >= 0)
        return {rho(pow2(i) - 1), 1, 0, 0};
    if (int n = indexed(name, "t"); n >= 0)
        return {rho(pow2(n) - 1) + RODegree{1, 0}, 0, 0, pow2(n)};
    if (int i = indexed(name, "tau"); i >= 0)
        return {rho(pow2(i)) - sigma(), 0, 0, 0};
    if (int k = indexed(name, "e"); k >= 1)
        return {rho(pow2(k) - 1), 0, 0, pow2(k)};
    if (int i = indexed(name, "xi"); i >= 1)
        return {rho(pow2(i) - 1), 0, 0, 0};
    if (int i = indexed(name, "x"); i >= 1)
        return {RODegree{pow2(i) - 1, 0}, 0, 0, pow2(i - 1)};
    throw std::invalid_argument("unknown generator name: " + name);
}

}  // namespace rhoext
