#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "surfride/hull.hpp"

namespace surfride {

enum class Level1Verdict { not_vulnerable, proceed_to_level2 };
std::string to_string(Level1Verdict v);

// Not vulnerable iff L >= 200 m or Fn <= 0.3.
Level1Verdict level1_check(double length_m, double fn_service);

// Long-term joint occurrence of significant wave height and zero-crossing period.
struct WaveScatterTable {
    std::vector<double> hs;      // bin centres [m]
    std::vector<double> tz;      // bin centres [s]
    std::vector<double> counts;  // row-major, hs.size() x tz.size()

    double count(std::size_t i_hs, std::size_t i_tz) const {
        return counts[i_hs * tz.size() + i_tz];
    }
    double total() const;
    // Throws ValidationError for mismatched sizes, negative counts or a zero total.
    void validate() const;
};

// Hs 0.5..16.5 m by Tz 3.5..18.5 s.
const WaveScatterTable& builtin_scatter_table();
// CSV: header row "hs,<tz...>", then one row per Hs bin. Errors carry the line number.
WaveScatterTable parse_scatter_csv(const std::string& text);
WaveScatterTable load_scatter_csv(const std::string& path);

struct LocalWaveGrid {
    static constexpr int n_r = 81;
    static constexpr int n_s = 101;
    static constexpr double r0 = 1.0;
    static constexpr double dr = 0.025;
    static constexpr double s0 = 0.03;
    static constexpr double ds = 0.0012;
    static double r(int i) { return r0 + dr * i; }
    static double s(int j) { return s0 + ds * j; }
};

inline constexpr double kBandParameter = 0.425;
inline constexpr double kT01OverTz = 1.086;
inline constexpr double kRsr = 0.005;

// Probability mass w_ij of the local regular wave (r_i, s_j) in sea state (Hs, Tz),
// including the dr ds cell factors.
double local_wave_pdf(double hs, double tz, double length_m, double r_i, double s_j,
                      double gravity = kStandardGravity, double dr = LocalWaveGrid::dr,
                      double ds = LocalWaveGrid::ds);

struct ImoCoefficients {
    double k = 0.0;       // wave number [1/m]
    double c = 0.0;       // celerity [m/s]
    double f = 0.0;       // local surge force amplitude [N]
    std::array<double, 6> a{};  // a0..a5
    // Quadratic A n^2 + B n + C = 0 equivalent to the critical-rate condition.
    double qa = 0.0, qb = 0.0, qc = 0.0;
    double residual(double n) const { return (qa * n + qb) * n + qc; }
};

ImoCoefficients imo_coefficients(const Vessel& vessel, double r_i, double s_j);

// Larger real root of the critical-rate quadratic. Throws NoSolutionError when no
// positive real root exists.
double critical_revs_imo(const Vessel& vessel, double r_i, double s_j);

// Nominal calm-water speed at the critical rate.
double critical_speed(const Vessel& vessel, double n_cr);

// Fn_cr for every local-wave cell, index i * n_s + j; NaN where no root exists.
struct CriticalFroudeGrid {
    std::vector<double> fn_cr;
    std::size_t no_root = 0;
    std::size_t nonmonotone_in_s = 0;  // cells where Fn_cr rises with steepness
};
CriticalFroudeGrid critical_froude_grid(const Vessel& vessel, unsigned workers = 0);

struct Level2CellContribution {
    double hs = 0.0;
    double tz = 0.0;
    double w2 = 0.0;
    double contribution = 0.0;  // W2 sum_ij w_ij C2_ij
};

struct Level2Result {
    double c_value = 0.0;
    double r_sr = kRsr;
    bool vulnerable = false;
    double fn_service = 0.0;
    double table_total = 0.0;
    std::size_t cells_no_root = 0;
    std::size_t cells_nonmonotone = 0;
    std::vector<Level2CellContribution> per_cell;
};

// W2 = count / table total. C2_ij = 1 iff fn_service > Fn_cr(r_i, s_j).
Level2Result level2_assess(const Vessel& vessel, double fn_service,
                           const WaveScatterTable& table = builtin_scatter_table(),
                           unsigned workers = 0);
Level2Result level2_assess(const Vessel& vessel, const CriticalFroudeGrid& grid,
                           double fn_service,
                           const WaveScatterTable& table = builtin_scatter_table());

}  // namespace surfride
