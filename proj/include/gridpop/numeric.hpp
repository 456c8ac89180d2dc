// Apache License, Version 2.0, refer to LICENSE.txt

#ifndef GRIDPOP_NUMERIC_HPP
#define GRIDPOP_NUMERIC_HPP

#include <optional>
#include <string>
#include <string_view>

namespace gridpop {

/// Shortest decimal representation that round-trips to the same double.
/// Integral values print without a fractional part ("39", not "39.0").
std::string format_double(double value);

/// Strict full-token parse. Accepts an optional leading '+'; rejects
/// trailing garbage. Returns nullopt when the token is not a number.
std::optional<double> parse_double(std::string_view token);

/// Compensated (Kahan) summation. Accumulation order is chosen by the
/// caller and must be deterministic where reproducibility matters.
class KahanSum {
  public:
    void add(double x)
    {
        const double y = x - compensation_;
        const double t = sum_ + y;
        compensation_ = (t - sum_) - y;
        sum_ = t;
    }

    double value() const { return sum_; }

  private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

} // namespace gridpop

#endif // GRIDPOP_NUMERIC_HPP
