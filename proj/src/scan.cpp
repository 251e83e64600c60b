#include "decoy/scan.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "decoy/errors.hpp"
#include "decoy/parallel.hpp"

namespace decoy {

std::string to_string(Curve c)
{
    switch (c)
    {
    case Curve::decoy: return "decoy";
    case Curve::gllp_truth: return "gllp_truth";
    case Curve::bs_etaT: return "bs_etaT";
    case Curve::bs_T: return "bs_T";
    }
    return "?";
}

Curve parse_curve(std::string const& name)
{
    for (auto c : {Curve::decoy, Curve::gllp_truth, Curve::bs_etaT, Curve::bs_T})
        if (to_string(c) == name)
            return c;
    throw ConfigError("unknown curve '" + name
                      + "' (expected decoy, gllp_truth, bs_etaT, bs_T or all)");
}

std::set<Curve> parse_curves(std::string const& list)
{
    std::set<Curve> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ','))
    {
        if (item.empty())
            continue;
        if (item == "all")
            out.insert({Curve::decoy, Curve::gllp_truth, Curve::bs_etaT, Curve::bs_T});
        else
            out.insert(parse_curve(item));
    }
    if (out.empty())
        throw ConfigError("curve selection is empty");
    return out;
}

void validate_scan(ScanConfig const& cfg)
{
    if (!std::isfinite(cfg.l_min) || !std::isfinite(cfg.l_max) || !std::isfinite(cfg.l_step))
        throw ConfigError("scan range must be finite");
    if (cfg.l_min < 0)
        throw ConfigError("l_min must be >= 0");
    if (cfg.l_min > cfg.l_max)
        throw ConfigError("l_min must be <= l_max");
    if (!(cfg.l_step > 0))
        throw ConfigError("l_step must be > 0");
    try
    {
        validate_profile(cfg.profile);
        validate_channel({cfg.delta_db_per_km, cfg.l_max, cfg.eta, cfg.p_d});
        validate_rate_params(cfg.rate);
    }
    catch (Error const& e)
    {
        throw ConfigError(e.what());
    }
}

std::vector<double> scan_lengths(ScanConfig const& cfg)
{
    auto const n = static_cast<std::size_t>(
        std::floor((cfg.l_max - cfg.l_min) / cfg.l_step + 1e-9)) + 1;
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = cfg.l_min + static_cast<double>(i) * cfg.l_step;
    return out;
}

RatePoint const& ScanRow::curve(Curve c) const
{
    switch (c)
    {
    case Curve::decoy: return decoy;
    case Curve::gllp_truth: return gllp_truth;
    case Curve::bs_etaT: return bs_etaT;
    case Curve::bs_T: return bs_T;
    }
    return decoy;
}

std::vector<ScanRow> rate_scan(ScanConfig const& cfg, unsigned workers)
{
    validate_scan(cfg);
    auto const profile = validate_profile(cfg.profile);
    auto const lengths = scan_lengths(cfg);
    std::vector<ScanRow> rows(lengths.size());
    double const mu = profile->mu;

    parallel_for(lengths.size(), workers, [&](std::size_t i) {
        ChannelParams const ch{cfg.delta_db_per_km, lengths[i], cfg.eta, cfg.p_d};
        ScanRow& row = rows[i];
        row.length_km = lengths[i];
        row.stats = honest_statistics(profile, ch, cfg.mode);
        row.truth = honest_truth(profile, ch, cfg.mode);
        row.bounds = estimate_bounds(row.stats, profile);
        double const e_sz = row.stats.error_sz;
        double const qs = row.stats.gain[PulseType::signal];
        row.decoy = rate_decoy(row.stats, row.bounds, cfg.rate);
        row.gllp_truth = rate_gllp(row.truth.q1s, qs, row.truth.e1x, e_sz, cfg.rate);
        row.bs_etaT = rate_bs(system_transmittance(ch), mu, e_sz, cfg.rate);
        row.bs_T = rate_bs(transmittance(ch.delta_db_per_km, ch.length_km), mu, e_sz, cfg.rate);
        for (auto* r : {&row.decoy, &row.gllp_truth, &row.bs_etaT, &row.bs_T})
            r->length_km = lengths[i];
    });
    return rows;
}

std::string format_number(double value)
{
    if (!std::isfinite(value))
        throw DomainError("non-finite value in numeric output");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::vector<std::string> scan_columns()
{
    return {"L_km",          "Q_s",          "E_sz",
            "Q_d1",          "Q_d2",         "Y0_L",
            "Y1_L",          "Q1s_L",        "e1x_U",
            "R_decoy_raw",   "R_decoy",      "R_gllp_truth_raw",
            "R_gllp_truth",  "R_bs_etaT_raw", "R_bs_etaT",
            "R_bs_T_raw",    "R_bs_T",       "saturated",
            "E_x_s",         "E_x_d1",       "E_x_d2",
            "Y0",            "Y1",           "e1x"};
}

void write_scan_csv(std::ostream& out, std::vector<ScanRow> const& rows)
{
    auto const cols = scan_columns();
    for (std::size_t i = 0; i < cols.size(); ++i)
        out << (i ? "," : "") << cols[i];
    out << '\n';

    for (auto const& r : rows)
    {
        auto const& s = r.stats;
        std::vector<std::string> f{
            format_number(r.length_km),
            format_number(s.gain[PulseType::signal]),
            format_number(s.error_sz),
            format_number(s.gain[PulseType::decoy1]),
            format_number(s.gain[PulseType::decoy2]),
            format_number(r.bounds.y0_lower),
            format_number(r.bounds.y1_lower),
            format_number(r.bounds.q1s_lower),
            r.bounds.e1x_upper ? format_number(*r.bounds.e1x_upper) : "unbounded",
            format_number(r.decoy.raw),
            format_number(r.decoy.secure),
            format_number(r.gllp_truth.raw),
            format_number(r.gllp_truth.secure),
            format_number(r.bs_etaT.raw),
            format_number(r.bs_etaT.secure),
            format_number(r.bs_T.raw),
            format_number(r.bs_T.secure),
            r.bounds.saturated ? "1" : "0",
            format_number(s.error_x[PulseType::signal]),
            format_number(s.error_x[PulseType::decoy1]),
            format_number(s.error_x[PulseType::decoy2]),
            format_number(r.truth.y0),
            format_number(r.truth.y1),
            format_number(r.truth.e1x),
        };
        for (std::size_t i = 0; i < f.size(); ++i)
            out << (i ? "," : "") << f[i];
        out << '\n';
    }
}

void write_scan_svg(std::ostream& out,
                    std::vector<ScanRow> const& rows,
                    std::set<Curve> const& curves,
                    bool log_y)
{
    constexpr double W = 800, H = 500, ml = 70, mr = 150, mt = 20, mb = 50;
    static constexpr char const* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

    auto yval = [&](double v) -> std::optional<double> {
        if (log_y)
            return v > 0 ? std::optional(std::log10(v)) : std::nullopt;
        return v;
    };

    double xmin = rows.empty() ? 0 : rows.front().length_km;
    double xmax = rows.empty() ? 1 : rows.back().length_km;
    double ymin = HUGE_VAL, ymax = -HUGE_VAL;
    for (auto const& r : rows)
        for (auto c : curves)
            if (auto y = yval(r.curve(c).secure))
            {
                ymin = std::min(ymin, *y);
                ymax = std::max(ymax, *y);
            }
    if (!(ymin < ymax))
    {
        ymin = std::isfinite(ymin) ? ymin - 1 : 0;
        ymax = ymin + 2;
    }
    if (xmax <= xmin)
        xmax = xmin + 1;

    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr); };
    auto py = [&](double y) { return mt + (ymax - y) / (ymax - ymin) * (H - mt - mb); };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\">\n";
    out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << W - ml - mr
        << "\" height=\"" << H - mt - mb << "\" fill=\"none\" stroke=\"black\"/>\n";
    out << "<text x=\"" << (ml + W - mr) / 2 << "\" y=\"" << H - 10
        << "\" text-anchor=\"middle\">L (km)</text>\n";
    out << "<text x=\"15\" y=\"" << (mt + H - mb) / 2 << "\" transform=\"rotate(-90 15 "
        << (mt + H - mb) / 2 << ")\" text-anchor=\"middle\">"
        << (log_y ? "log10 R" : "R") << "</text>\n";
    for (int k = 0; k <= 4; ++k)
    {
        double const x = xmin + (xmax - xmin) * k / 4;
        double const y = ymin + (ymax - ymin) * k / 4;
        out << "<text x=\"" << px(x) << "\" y=\"" << H - mb + 18
            << "\" text-anchor=\"middle\" font-size=\"12\">" << format_number(x) << "</text>\n";
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3g", y);
        out << "<text x=\"" << ml - 5 << "\" y=\"" << py(y) + 4
            << "\" text-anchor=\"end\" font-size=\"12\">" << buf << "</text>\n";
    }

    int slot = 0;
    for (auto c : curves)
    {
        char const* color = colors[static_cast<int>(c)];
        std::string points;
        auto flush = [&] {
            if (!points.empty())
                out << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"" << points
                    << "\"/>\n";
            points.clear();
        };
        for (auto const& r : rows)
        {
            auto y = yval(r.curve(c).secure);
            if (!y)
            {
                flush();
                continue;
            }
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(r.length_km), py(*y));
            points += buf;
        }
        flush();
        double const ly = mt + 20 + 20 * slot++;
        out << "<line x1=\"" << W - mr + 10 << "\" y1=\"" << ly << "\" x2=\"" << W - mr + 35
            << "\" y2=\"" << ly << "\" stroke=\"" << color << "\"/>\n";
        out << "<text x=\"" << W - mr + 40 << "\" y=\"" << ly + 4 << "\" font-size=\"12\">"
            << to_string(c) << "</text>\n";
    }
    out << "</svg>\n";
}

std::optional<double> zero_crossing(std::vector<ScanRow> const& rows, Curve c)
{
    for (std::size_t i = 1; i < rows.size(); ++i)
    {
        double const a = rows[i - 1].curve(c).raw;
        double const b = rows[i].curve(c).raw;
        if (a > 0 && b <= 0)
        {
            double const x0 = rows[i - 1].length_km;
            double const x1 = rows[i].length_km;
            return x0 + (x1 - x0) * a / (a - b);
        }
    }
    return std::nullopt;
}

}  // namespace decoy
