#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>

namespace wickprop {

// Worker count from the THREADS environment variable; 0 or unset picks
// std::thread::hardware_concurrency().
int resolve_threads();

// Runs body(i) for i in [0, n) on a static block partition. Results must not
// depend on the partition: bodies write disjoint state.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

std::uint64_t fnv1a64(std::span<const unsigned char> bytes);
std::uint64_t fnv1a64(const std::string& text);
std::uint64_t fnv1a64_file(const std::string& path);  // throws std::runtime_error

// Locale-independent shortest round-trip decimal form (<= 17 significant
// digits); from_chars recovers the exact double.
std::string format_double(double v);

}  // namespace wickprop
