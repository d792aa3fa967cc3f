#pragma once

#include <optional>
#include <span>
#include <string_view>

// Dense inner loops of the CEFR classifier. Every kernel has a scalar
// reference; vector variants are selected at runtime from the CPU features.
namespace hitex::kernels {

enum class Isa { scalar, avx2, neon };

std::string_view to_string(Isa isa);
bool isa_available(Isa isa);

// Best available ISA unless overridden with force_isa (tests, reproducibility).
Isa active_isa();
void force_isa(std::optional<Isa> isa);

// sum_i a[i] * b[i]; throws std::invalid_argument on unequal lengths.
double dot(std::span<const double> a, std::span<const double> b);
// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

namespace scalar {
double dot(std::span<const double> a, std::span<const double> b);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
double dot(std::span<const double> a, std::span<const double> b);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
}  // namespace avx2
#endif

#if defined(__aarch64__)
namespace neon {
double dot(std::span<const double> a, std::span<const double> b);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
}  // namespace neon
#endif

}  // namespace hitex::kernels
