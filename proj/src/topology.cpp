#include "herd/topology.hpp"

#include "herd/constants.hpp"
#include "herd/error.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace herd {

namespace {

constexpr double kAsymmetryWarn = 1e-6;

const char* kind_name(ElementKind k) { return k == ElementKind::inductive ? "inductive" : "capacitive"; }

// Re-raise the in-flight toolkit error as the same type with `prefix` prepended.
[[noreturn]] void rethrow_annotated(const std::string& prefix) {
    try {
        throw;
    } catch (const OutOfRange& e) {
        throw OutOfRange(prefix + e.what());
    } catch (const ZeroTransmission& e) {
        throw ZeroTransmission(prefix + e.what());
    } catch (const SingularConversion& e) {
        throw SingularConversion(prefix + e.what());
    } catch (const InvalidArgument& e) {
        throw InvalidArgument(prefix + e.what());
    } catch (const Error& e) {
        throw Error(prefix + e.what());
    }
}

}  // namespace

SectionModel SectionModel::analytic(ElementKind kind, double z0, double eps_eff) {
    TEMLineSection{z0, 0.0, eps_eff}.validate();
    return SectionModel{kind, AnalyticBody{z0, eps_eff}, std::nullopt};
}

SectionModel SectionModel::tabulated(ElementKind kind, std::shared_ptr<const SectionFamily> family) {
    if (!family) {
        throw InvalidArgument("tabulated section needs a family");
    }
    return SectionModel{kind, TabulatedBody{std::move(family)}, std::nullopt};
}

FilterTopology::FilterTopology(std::vector<SectionModel> half_sections, ReferenceImpedance ref)
    : sections_(std::move(half_sections)), ref_(ref) {
    if (sections_.empty() || sections_.size() % 2 == 0) {
        throw InvalidArgument("a symmetric filter needs an odd number of half sections (got " +
                              std::to_string(sections_.size()) + ")");
    }
    for (std::size_t i = 0; i < sections_.size(); ++i) {
        const std::size_t index = i + 1;
        const ElementKind expected = index % 2 == 1 ? ElementKind::capacitive : ElementKind::inductive;
        if (sections_[i].kind != expected) {
            throw InvalidArgument("section " + std::to_string(index) + " must be " + kind_name(expected) +
                                  " (kinds alternate and the center section is capacitive)");
        }
        if (const auto* tab = std::get_if<TabulatedBody>(&sections_[i].body)) {
            all_analytic_ = false;
            if (!tab->family) {
                throw InvalidArgument("section " + std::to_string(index) + " has no family");
            }
            if (!(tab->family->ref() == ref_)) {
                throw InvalidArgument("section " + std::to_string(index) +
                                      " family reference impedance differs from the filter's");
            }
            if (const double asym = tab->family->asymmetry(); asym > kAsymmetryWarn) {
                warnings_.push_back("section " + std::to_string(index) +
                                    " tabulated data is not mirror-symmetric (max |s11 - s22| = " +
                                    std::to_string(asym) +
                                    "); the mirrored half uses the same orientation");
            }
        } else {
            const auto& a = std::get<AnalyticBody>(sections_[i].body);
            TEMLineSection{a.z0, 0.0, a.eps_eff}.validate();
        }
    }
}

std::vector<ExpandedSection> expand_symmetric(const LengthVector& lengths) {
    const std::size_t n = lengths.size();
    if (n == 0) {
        throw InvalidArgument("length vector is empty");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!(lengths[i] >= 0.0) || !std::isfinite(lengths[i])) {
            throw InvalidArgument("section " + std::to_string(i + 1) + " length must be finite and >= 0");
        }
    }
    std::vector<ExpandedSection> out;
    out.reserve(2 * n);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        out.push_back({i + 1, lengths[i]});
    }
    out.push_back({n, 0.5 * lengths[n - 1]});
    out.push_back({n, 0.5 * lengths[n - 1]});
    for (std::size_t i = n - 1; i-- > 0;) {
        out.push_back({i + 1, lengths[i]});
    }
    return out;
}

TwoPortABCD section_abcd(const SectionModel& model, Frequency f, double length) {
    if (const auto* a = std::get_if<AnalyticBody>(&model.body)) {
        return line_abcd(TEMLineSection{a->z0, length, a->eps_eff}, f);
    }
    return family_to_abcd(*std::get<TabulatedBody>(model.body).family, f, length);
}

namespace {

// Lossless line products stay in the form [a, jb; jc, d] with a..d real.
struct RealChain {
    double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

    void append_line(double cos_t, double sin_t, double z0) {
        const double lb = z0 * sin_t;
        const double lc = sin_t / z0;
        const RealChain r{a * cos_t - b * lc, a * lb + b * cos_t, c * cos_t + d * lc, -c * lb + d * cos_t};
        *this = r;
    }
};

bool is_uniform(std::span<const double> hz) {
    if (hz.size() < 3) return false;
    const double step = (hz.back() - hz.front()) / static_cast<double>(hz.size() - 1);
    for (std::size_t k = 1; k < hz.size(); ++k) {
        if (std::abs((hz[k] - hz[k - 1]) - step) > 1e-9 * step) return false;
    }
    return true;
}

// All-analytic fast path. Sections are mirror-symmetric, so T_n...T_1 is the
// reverse of T_1...T_n and only the half product is formed. On uniform grids
// cos/sin advance by a rotation and are re-seeded exactly every kReseed points.
FilterResponse analytic_response(const FilterTopology& topology, const LengthVector& lengths,
                                 const FrequencyGrid& grid) {
    constexpr std::size_t kReseed = 16;
    const std::size_t n = topology.size();
    std::vector<double> z0(n), electrical(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& body = std::get<AnalyticBody>(topology.half_sections()[i].body);
        const double len = i + 1 == n ? 0.5 * lengths[i] : lengths[i];
        z0[i] = body.z0;
        electrical[i] = std::sqrt(body.eps_eff) * len / kSpeedOfLight;
    }
    const auto hz = grid.hz();
    const bool uniform = is_uniform(hz);
    std::vector<double> cs(n), sn(n), step_c(n), step_s(n);
    if (uniform) {
        const double d_omega = 2.0 * kPi * (hz.back() - hz.front()) / static_cast<double>(hz.size() - 1);
        for (std::size_t i = 0; i < n; ++i) {
            step_c[i] = std::cos(d_omega * electrical[i]);
            step_s[i] = std::sin(d_omega * electrical[i]);
        }
    }
    const Complex j{0.0, 1.0};
    const double r0 = topology.ref().ohms();
    FilterResponse out{grid, {}};
    out.s.reserve(hz.size());
    for (std::size_t k = 0; k < hz.size(); ++k) {
        const double omega = Frequency(hz[k]).omega();
        const bool reseed = !uniform || k % kReseed == 0;
        RealChain half;
        for (std::size_t i = 0; i < n; ++i) {
            if (reseed) {
                cs[i] = std::cos(omega * electrical[i]);
                sn[i] = std::sin(omega * electrical[i]);
            } else {
                const double c = cs[i] * step_c[i] - sn[i] * step_s[i];
                sn[i] = sn[i] * step_c[i] + cs[i] * step_s[i];
                cs[i] = c;
            }
            half.append_line(cs[i], sn[i], z0[i]);
        }
        // [a, jb; jc, d] * [d, jb; jc, a] = [A, jB; jC, A]
        const double big_a = half.a * half.d - half.b * half.c;
        const double bn = 2.0 * half.a * half.b / r0;
        const double cn = 2.0 * half.c * half.d * r0;
        const double det = big_a * big_a + (2.0 * half.a * half.b) * (2.0 * half.c * half.d);
        // den = 2A + j(bn + cn)
        const double den_re = 2.0 * big_a;
        const double den_im = bn + cn;
        const double den_sq = den_re * den_re + den_im * den_im;
        if (std::sqrt(den_sq) < tol::kSingular) {
            throw SingularConversion("ABCD to S conversion is singular at " + std::to_string(hz[k]) + " Hz");
        }
        const Complex inv{den_re / den_sq, -den_im / den_sq};
        TwoPortS sp;
        sp.ref = topology.ref();
        sp.s11 = j * (bn - cn) * inv;
        sp.s22 = sp.s11;
        sp.s21 = 2.0 * inv;
        sp.s12 = 2.0 * det * inv;
        out.s.push_back(sp);
    }
    return out;
}

}  // namespace

FilterResponse response(const FilterTopology& topology, const LengthVector& lengths, const FrequencyGrid& grid) {
    if (lengths.size() != topology.size()) {
        throw InvalidArgument("expected " + std::to_string(topology.size()) + " section lengths, got " +
                              std::to_string(lengths.size()));
    }
    const auto chain = expand_symmetric(lengths);
    if (topology.all_analytic()) {
        return analytic_response(topology, lengths, grid);
    }
    FilterResponse out{grid, {}};
    out.s.reserve(grid.size());
    for (const double hz : grid.hz()) {
        const Frequency f(hz);
        TwoPortABCD total = TwoPortABCD::identity();
        for (const auto& step : chain) {
            try {
                total = cascade(total, section_abcd(topology.half_sections()[step.index - 1], f, step.length));
            } catch (const Error&) {
                rethrow_annotated("section " + std::to_string(step.index) + " at " + std::to_string(hz) + " Hz: ");
            }
        }
        out.s.push_back(abcd_to_s(total, topology.ref()));
    }
    return out;
}

double cutoff_3db(const FilterResponse& resp) {
    const auto& f = resp.grid.hz();
    double prev = 0.0;
    for (std::size_t i = 0; i < resp.s.size(); ++i) {
        const double db = magnitude_db(resp.s[i].s21);
        if (db <= -3.0) {
            if (i == 0) {
                break;
            }
            if (std::isinf(db)) {
                return f[i];
            }
            const double t = (-3.0 - prev) / (db - prev);
            return f[i - 1] + t * (f[i] - f[i - 1]);
        }
        prev = db;
    }
    throw UnbracketedCutoff("|s21| does not cross -3 dB from above inside the frequency grid");
}

FilterMetrics metrics(const FilterResponse& resp, const MetricBands& bands, bool require_cutoff) {
    if (!(bands.pass_lo <= bands.pass_hi) || !(bands.stop_lo <= bands.stop_hi)) {
        throw InvalidArgument("metric bands must satisfy lo <= hi");
    }
    const double inf = std::numeric_limits<double>::infinity();
    FilterMetrics m{inf, -inf, inf, std::nullopt};
    std::size_t n_pass = 0;
    std::size_t n_stop = 0;
    for (std::size_t i = 0; i < resp.s.size(); ++i) {
        const double f = resp.grid[i];
        const double s21_db = magnitude_db(resp.s[i].s21);
        if (f >= bands.pass_lo && f <= bands.pass_hi) {
            ++n_pass;
            m.worst_return_loss_db = std::min(m.worst_return_loss_db, 0.0 - magnitude_db(resp.s[i].s11));
            m.worst_insertion_loss_db = std::max(m.worst_insertion_loss_db, 0.0 - s21_db);
        }
        if (f >= bands.stop_lo && f <= bands.stop_hi) {
            ++n_stop;
            m.min_rejection_db = std::min(m.min_rejection_db, 0.0 - s21_db);
        }
    }
    if (n_pass == 0) {
        throw GridCoverage("no grid points inside the passband");
    }
    if (n_stop == 0) {
        throw GridCoverage("no grid points inside the stopband");
    }
    if (require_cutoff) {
        m.cutoff_hz = cutoff_3db(resp);
    } else {
        try {
            m.cutoff_hz = cutoff_3db(resp);
        } catch (const UnbracketedCutoff&) {
        }
    }
    return m;
}

}  // namespace herd
