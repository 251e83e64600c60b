#pragma once

#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "decoy/channel_model.hpp"
#include "decoy/decoy_estimator.hpp"
#include "decoy/key_rate.hpp"

namespace decoy {

enum class Curve
{
    decoy,       //!< rate at the decoy bounds
    gllp_truth,  //!< rate at the generator's own Q1 and e1
    bs_etaT,     //!< beam splitting replacing line and detector
    bs_T         //!< beam splitting replacing the line only
};

std::string to_string(Curve c);
Curve parse_curve(std::string const& name);
//! Comma-separated curve names; "all" selects every curve.
std::set<Curve> parse_curves(std::string const& list);

struct ScanConfig
{
    double l_min{0};
    double l_max{200};
    double l_step{1};
    IntensityProfile profile{};
    double delta_db_per_km{0.2};
    double eta{0.1};
    double p_d{1e-6};
    KeyRateParams rate{};
    //! Curves drawn in the SVG; the CSV always carries every column.
    std::set<Curve> curves{Curve::decoy, Curve::gllp_truth, Curve::bs_etaT, Curve::bs_T};
    std::string out;
    YieldMode mode{YieldMode::paper};
};

//! Raises ConfigError for min > max, non-positive step or invalid physics.
void validate_scan(ScanConfig const& cfg);

//! Lengths l_min, l_min + step, ... up to l_max (inclusive within 1e-9 step).
std::vector<double> scan_lengths(ScanConfig const& cfg);

struct ScanRow
{
    double length_km{0};
    ObservedStatistics stats;
    TruthValues truth;
    DecoyBounds bounds;
    RatePoint decoy;
    RatePoint gllp_truth;
    RatePoint bs_etaT;
    RatePoint bs_T;

    RatePoint const& curve(Curve c) const;
};

//! One row per length, computed in parallel and returned in length order.
std::vector<ScanRow> rate_scan(ScanConfig const& cfg, unsigned workers = 0);

//! "%.17g"; the CSV never contains non-finite values.
std::string format_number(double value);

//! Column names in output order; new columns are only ever appended.
std::vector<std::string> scan_columns();
void write_scan_csv(std::ostream& out, std::vector<ScanRow> const& rows);

void write_scan_svg(std::ostream& out,
                    std::vector<ScanRow> const& rows,
                    std::set<Curve> const& curves,
                    bool log_y);

//! Linear interpolation of the first sign change of the raw rate, if any.
std::optional<double> zero_crossing(std::vector<ScanRow> const& rows, Curve c);

}  // namespace decoy
