#ifndef LAWV_HASH_HPP
#define LAWV_HASH_HPP

#include <lawv/model.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace lawv {

std::uint64_t fnv1a64(std::string_view data);
std::string to_hex(std::uint64_t value);

/// Content hash of the canonical theory rendering.
std::string theory_hash(const Theory & t);

/// Content hash of an algebra record: theory hash, size, and the
/// flattened tables in signature order.
std::string algebra_hash(const FiniteAlgebra & a);

} // namespace lawv

#endif
