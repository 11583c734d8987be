#pragma once
#include <cstdint>

namespace spmesl {

/// SplitMix64 driven as a counter-based generator ("splitmix64-v1"):
/// draw i is mix(seed + (i + 1) * golden_gamma). Outputs depend only on the
/// seed and the draw count, so streams are portable across platforms.
class Rng
{
public:
    static constexpr const char* kName = "splitmix64-v1";

    explicit Rng(std::uint64_t seed) noexcept : seed_(seed) {}

    std::uint64_t next_u64() noexcept;
    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept;
    /// Uniform integer in [0, bound). bound must be > 0.
    std::uint64_t below(std::uint64_t bound) noexcept;
    /// Standard normal via Box-Muller; the second variate is cached.
    double normal() noexcept;

    std::uint64_t draws() const noexcept { return counter_; }

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

/// SplitMix64 finaliser; also used to derive independent sub-seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) noexcept;

} // namespace spmesl
