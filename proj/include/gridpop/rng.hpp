// Apache License, Version 2.0, refer to LICENSE.txt

#ifndef GRIDPOP_RNG_HPP
#define GRIDPOP_RNG_HPP

#include <cstdint>
#include <random>

namespace gridpop {

/// Seedable random source with samplers implemented in-tree, so that a seed
/// pins the exact draw sequence independently of the standard library's
/// distribution implementations.
class Rng {
  public:
    explicit Rng(std::uint64_t seed)
      : engine_(seed)
    {
    }

    /// Uniform on the open interval (0, 1).
    double uniform()
    {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Box-Muller (cosine branch only, stateless).
    double normal(double mean = 0.0, double sd = 1.0);

    /// Exact Poisson sampling: sequential inversion for small means, the
    /// PTRS transformed-rejection method (Hormann, 1993) otherwise.
    long long poisson(double mean);

  private:
    std::mt19937_64 engine_;
};

} // namespace gridpop

#endif // GRIDPOP_RNG_HPP
