#include "lawv/hash.hpp"
#include "lawv/dsl.hpp"

namespace lawv {

std::uint64_t fnv1a64(std::string_view data)
{
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string to_hex(std::uint64_t value)
{
    static const char digits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = digits[value & 0xf];
        value >>= 4;
    }
    return out;
}

std::string theory_hash(const Theory & t)
{
    return to_hex(fnv1a64(render_theory(t)));
}

std::string algebra_hash(const FiniteAlgebra & a)
{
    std::string blob = theory_hash(*a.theory) + "|" + std::to_string(a.size);
    for (std::size_t s = 0; s < a.tables.size(); ++s) {
        blob += "|";
        blob += a.theory->signature[s].name;
        blob += ":";
        for (int v : a.tables[s]) {
            blob += std::to_string(v);
            blob += ",";
        }
    }
    return to_hex(fnv1a64(blob));
}

} // namespace lawv
