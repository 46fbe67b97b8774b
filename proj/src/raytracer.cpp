// terasim: deterministic indoor terahertz radio propagation simulator
// Copyright (C) 2026 terasim contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "terasim/raytracer.hpp"

#include "terasim/csv.hpp"
#include "terasim/errors.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace terasim
{

namespace
{

constexpr double kPi = 3.14159265358979323846;
// 10*log10(e): converts nepers (exponential attenuation) to decibels.
constexpr double kDbPerNeper = 4.342944819032518;
// Below this leg length the point-transceiver model breaks down (the 1/r^2
// spreading term diverges); such legs are skipped rather than amplified.
constexpr double kNearFieldCap = 0.1;

struct FlatSegment
{
    Vec3 center;
    Vec3 normal;
    double area = 0.0;
    double near_guard = 0.0;
    int surface = -1;
};

// Transmit-side geometry of one segment for a fixed transmitter: leg length,
// incidence angle, and the mirror of the incoming direction (for measuring
// how far a candidate outgoing direction deviates from specular).
struct TxSegView
{
    bool visible = false;
    double d1 = 0.0;
    double cos_in = 0.0;
    double theta_in_deg = 0.0;
    Vec3 reflect_dir;
};

// Candidate path record used inside the tracing loops before assembly.
struct RawRec
{
    bool viable = false;
    int seg1 = -1;
    int seg2 = -1;
    double length = 0.0;
    double total_dbm = -INFINITY;
    std::vector<double> gain_db;
};

struct MatSampler
{
    const MaterialProfile *prof = nullptr;
    std::vector<size_t> f0; // per subband: lower anchor index
    std::vector<double> tf; // per subband: anchor interpolation weight
};

} // namespace

double PathGainSpectrum::total_gain_db() const
{
    double sum = 0.0;
    for (double g : gain_db)
        sum += db_to_linear(g);
    return linear_to_db(sum);
}

double path_received_dbm(const PropagationPath &path, const RadioConfig &cfg)
{
    return cfg.subband_tx_power_dbm() + path.gain.total_gain_db();
}

std::vector<double> path_received_subbands_dbm(const PropagationPath &path, const RadioConfig &cfg)
{
    std::vector<double> out(path.gain.gain_db.size());
    double sub_tx = cfg.subband_tx_power_dbm();
    for (size_t j = 0; j < out.size(); ++j)
        out[j] = sub_tx + path.gain.gain_db[j];
    return out;
}

struct TraceEngine::Impl
{
    Scene scene;
    RadioConfig cfg;
    TraceOptions opt;

    std::vector<double> f_ghz;      // subband centers
    std::vector<double> fspl_const; // 20*log10(4*pi*f/c) per subband
    std::vector<double> k_per_m;    // absorption coefficient per subband
    double sub_tx_dbm = 0.0;

    std::vector<MatSampler> sampler_by_surface;
    std::vector<FlatSegment> fine;
    std::vector<FlatSegment> coarse;

    // Transmit cache for best_first_order.
    bool tx_ready = false;
    Node tx_node;
    double tx_gain_dbi = 0.0;
    std::vector<TxSegView> tx_view;

    int thread_count() const
    {
#ifdef _OPENMP
        return opt.threads > 0 ? opt.threads : omp_get_max_threads();
#else
        return 1;
#endif
    }

    int surface_index(const std::string &id) const
    {
        for (size_t i = 0; i < scene.surfaces.size(); ++i)
            if (scene.surfaces[i].id == id)
                return static_cast<int>(i);
        return -1;
    }

    bool leg_blocked(const Vec3 &a, const Vec3 &b, int ignore1, int ignore2) const
    {
        for (const Obstacle &o : scene.obstacles)
            if (segment_crosses_box(a, b, o.min_corner, o.max_corner))
                return true;
        for (size_t i = 0; i < scene.surfaces.size(); ++i)
        {
            int idx = static_cast<int>(i);
            if (idx != ignore1 && idx != ignore2 &&
                segment_crosses_surface(a, b, scene.surfaces[i]))
                return true;
        }
        return false;
    }

    std::vector<FlatSegment> flatten(double segment_size) const
    {
        std::vector<FlatSegment> out;
        for (size_t i = 0; i < scene.surfaces.size(); ++i)
        {
            for (const Segment &seg : tessellate(scene.surfaces[i], segment_size))
            {
                FlatSegment f;
                f.center = seg.center;
                f.normal = seg.normal;
                f.area = seg.area;
                f.near_guard = std::min(0.5 * std::sqrt(seg.area), kNearFieldCap);
                f.surface = static_cast<int>(i);
                out.push_back(f);
            }
        }
        return out;
    }

    std::vector<TxSegView> build_tx_view(const Vec3 &tx_pos,
                                         const std::vector<FlatSegment> &segs) const
    {
        std::vector<TxSegView> view(segs.size());
        for (size_t s = 0; s < segs.size(); ++s)
        {
            const FlatSegment &seg = segs[s];
            Vec3 leg = seg.center - tx_pos;
            double d1 = leg.norm();
            if (d1 < seg.near_guard || d1 <= 0.0)
                continue;
            Vec3 in = leg / d1;
            // The incoming ray must hit the active (normal) side.
            double cos_in = -in.dot(seg.normal);
            if (cos_in <= 1e-12)
                continue;
            if (leg_blocked(tx_pos, seg.center, seg.surface, -1))
                continue;
            TxSegView &v = view[s];
            v.visible = true;
            v.d1 = d1;
            v.cos_in = cos_in;
            v.theta_in_deg = std::acos(std::min(1.0, cos_in)) * 180.0 / kPi;
            v.reflect_dir = in - seg.normal * (2.0 * in.dot(seg.normal));
        }
        return view;
    }

    // Evaluates the material response of `seg` for the given incoming view and
    // outgoing direction at every subband. The profile is queried at the
    // symmetrized angle pair (theta_sym, theta_sym + deviation-from-specular),
    // which makes forward and reverse traversals hit identical grid points and
    // keeps composed path gains reciprocal.
    void sample_segment_energy(const TxSegView &v, const FlatSegment &seg, const Vec3 &out_dir,
                               double cos_out, std::vector<double> &bil_scratch,
                               std::vector<double> &energy_out) const
    {
        const MatSampler &m = sampler_by_surface[static_cast<size_t>(seg.surface)];
        const MaterialProfile &p = *m.prof;
        double theta_out_deg = std::acos(std::min(1.0, cos_out)) * 180.0 / kPi;
        double theta_sym = (v.theta_in_deg + theta_out_deg) / 2.0;
        double dev = angle_between_deg(out_dir, v.reflect_dir);
        double theta_query = std::min(theta_sym + dev, 90.0);

        auto [i0, ti] = bracket_axis(p.incidence_deg, theta_sym);
        auto [o0, to] = bracket_axis(p.observation_deg, theta_query);
        size_t i1 = std::min(i0 + 1, p.incidence_deg.size() - 1);
        size_t o1 = std::min(o0 + 1, p.observation_deg.size() - 1);

        size_t nf = p.frequency_ghz.size();
        bil_scratch.resize(nf);
        for (size_t f = 0; f < nf; ++f)
        {
            double c0 = p.at(i0, o0, f) + (p.at(i0, o1, f) - p.at(i0, o0, f)) * to;
            double c1 = p.at(i1, o0, f) + (p.at(i1, o1, f) - p.at(i1, o0, f)) * to;
            bil_scratch[f] = c0 + (c1 - c0) * ti;
        }
        size_t n = f_ghz.size();
        energy_out.resize(n);
        for (size_t j = 0; j < n; ++j)
        {
            size_t lo = m.f0[j];
            size_t hi = std::min(lo + 1, nf - 1);
            energy_out[j] = bil_scratch[lo] + (bil_scratch[hi] - bil_scratch[lo]) * m.tf[j];
        }
    }

    // Per-subband gain of tx -> seg -> rx. Returns false when the bounce is
    // not viable (behind the surface, inside the near-field guard, blocked).
    bool first_order_gain(const TxSegView &v, const FlatSegment &seg, const Vec3 &rx_pos,
                          double gtx_dbi, double grx_dbi, std::vector<double> &bil_scratch,
                          std::vector<double> &energy_scratch, std::vector<double> &gain_out,
                          double &length_out) const
    {
        if (!v.visible)
            return false;
        Vec3 leg = rx_pos - seg.center;
        double d2 = leg.norm();
        if (d2 < seg.near_guard || d2 <= 0.0)
            return false;
        Vec3 out_dir = leg / d2;
        double cos_out = out_dir.dot(seg.normal);
        if (cos_out <= 1e-12)
            return false;
        if (leg_blocked(seg.center, rx_pos, seg.surface, -1))
            return false;

        sample_segment_energy(v, seg, out_dir, cos_out, bil_scratch, energy_scratch);

        // Distance and geometry terms are arranged symmetrically in (d1, d2)
        // so that swapping the endpoints reproduces the same value.
        double sum_logd = std::log10(v.d1) + std::log10(d2);
        double cos_prod = v.cos_in * cos_out;
        double geo_db = 10.0 * std::log10(seg.area * std::sqrt(cos_prod) / (2.0 * kPi)) -
                        20.0 * sum_logd;
        double base = gtx_dbi + grx_dbi + geo_db;
        double length = v.d1 + d2;

        size_t n = f_ghz.size();
        gain_out.resize(n);
        for (size_t j = 0; j < n; ++j)
            gain_out[j] = base - fspl_const[j] - kDbPerNeper * k_per_m[j] * length +
                          10.0 * std::log10(energy_scratch[j]);
        length_out = length;
        return true;
    }

    // Per-subband gain of tx -> seg1 -> seg2 -> rx.
    bool second_order_gain(const TxSegView &v1, const FlatSegment &s1, const FlatSegment &s2,
                           const Vec3 &rx_pos, double gtx_dbi, double grx_dbi,
                           std::vector<double> &bil_scratch, std::vector<double> &e1_scratch,
                           std::vector<double> &e2_scratch, std::vector<double> &gain_out,
                           double &length_out) const
    {
        if (!v1.visible || s1.surface == s2.surface)
            return false;
        Vec3 mid = s2.center - s1.center;
        double d2 = mid.norm();
        double guard = std::max(s1.near_guard, s2.near_guard);
        if (d2 < guard || d2 <= 0.0)
            return false;
        Vec3 mid_dir = mid / d2;
        double cos_out1 = mid_dir.dot(s1.normal);
        double cos_in2 = -mid_dir.dot(s2.normal);
        if (cos_out1 <= 1e-12 || cos_in2 <= 1e-12)
            return false;

        Vec3 leg3 = rx_pos - s2.center;
        double d3 = leg3.norm();
        if (d3 < s2.near_guard || d3 <= 0.0)
            return false;
        Vec3 out2 = leg3 / d3;
        double cos_out2 = out2.dot(s2.normal);
        if (cos_out2 <= 1e-12)
            return false;

        if (leg_blocked(s1.center, s2.center, s1.surface, s2.surface) ||
            leg_blocked(s2.center, rx_pos, s2.surface, -1))
            return false;

        sample_segment_energy(v1, s1, mid_dir, cos_out1, bil_scratch, e1_scratch);

        TxSegView v2;
        v2.visible = true;
        v2.d1 = d2;
        v2.cos_in = cos_in2;
        v2.theta_in_deg = std::acos(std::min(1.0, cos_in2)) * 180.0 / kPi;
        v2.reflect_dir = mid_dir - s2.normal * (2.0 * mid_dir.dot(s2.normal));
        sample_segment_energy(v2, s2, out2, cos_out2, bil_scratch, e2_scratch);

        double length = v1.d1 + d2 + d3;
        double geo1 = 10.0 * std::log10(s1.area * std::sqrt(v1.cos_in * cos_out1) /
                                        (2.0 * kPi * d2 * d2));
        double geo2 = 10.0 * std::log10(s2.area * std::sqrt(cos_in2 * cos_out2) /
                                        (2.0 * kPi * d3 * d3));
        double base = gtx_dbi + grx_dbi + geo1 + geo2 - 20.0 * std::log10(v1.d1);

        size_t n = f_ghz.size();
        gain_out.resize(n);
        for (size_t j = 0; j < n; ++j)
            gain_out[j] = base - fspl_const[j] - kDbPerNeper * k_per_m[j] * length +
                          10.0 * std::log10(e1_scratch[j]) + 10.0 * std::log10(e2_scratch[j]);
        length_out = length;
        return true;
    }

    double total_received_dbm(const std::vector<double> &gain_db) const
    {
        double sum = 0.0;
        for (double g : gain_db)
            sum += db_to_linear(g);
        return sub_tx_dbm + linear_to_db(sum);
    }
};

TraceEngine::TraceEngine(const Scene &scene, const RadioConfig &cfg,
                         const MaterialLibrary &materials, const AbsorptionTable &absorption,
                         const TraceOptions &options)
    : impl_(std::make_unique<Impl>())
{
    scene.validate();
    cfg.validate();
    absorption.validate();
    if (options.max_order < 0 || options.max_order > 2)
        throw ValidationError("trace: max_order must be 0, 1 or 2");
    if (!(options.segment_size_m > 0.0) || !(options.second_order_segment_size_m > 0.0))
        throw ValidationError("trace: segment sizes must be positive");

    Impl &im = *impl_;
    im.scene = scene;
    im.cfg = cfg;
    im.opt = options;
    im.f_ghz = cfg.subband_centers_ghz();
    im.sub_tx_dbm = cfg.subband_tx_power_dbm();
    im.fspl_const.resize(im.f_ghz.size());
    im.k_per_m.resize(im.f_ghz.size());
    for (size_t j = 0; j < im.f_ghz.size(); ++j)
    {
        if (im.f_ghz[j] <= 0.0)
            throw ValidationError("trace: subband frequencies must stay positive");
        im.fspl_const[j] = 20.0 * std::log10(4.0 * kPi * im.f_ghz[j] * 1e9 / kSpeedOfLight);
        im.k_per_m[j] = absorption.coefficient_at(im.f_ghz[j]);
    }

    im.sampler_by_surface.resize(scene.surfaces.size());
    for (size_t i = 0; i < scene.surfaces.size(); ++i)
    {
        const MaterialProfile &prof = materials.get(scene.surfaces[i].material);
        if (im.f_ghz.front() < prof.min_frequency_ghz() ||
            im.f_ghz.back() > prof.max_frequency_ghz())
            throw ValidationError("material '" + prof.name + "' does not cover the band [" +
                                  format_number(im.f_ghz.front()) + ", " +
                                  format_number(im.f_ghz.back()) + "] GHz");
        MatSampler &m = im.sampler_by_surface[i];
        m.prof = &prof;
        m.f0.resize(im.f_ghz.size());
        m.tf.resize(im.f_ghz.size());
        for (size_t j = 0; j < im.f_ghz.size(); ++j)
        {
            auto [f0, tf] = bracket_axis(prof.frequency_ghz, im.f_ghz[j]);
            m.f0[j] = f0;
            m.tf[j] = tf;
        }
    }

    if (options.max_order >= 1)
        im.fine = im.flatten(options.segment_size_m);
    if (options.max_order >= 2)
        im.coarse = im.flatten(options.second_order_segment_size_m);
}

TraceEngine::~TraceEngine() = default;
TraceEngine::TraceEngine(TraceEngine &&) noexcept = default;
TraceEngine &TraceEngine::operator=(TraceEngine &&) noexcept = default;

const RadioConfig &TraceEngine::radio() const { return impl_->cfg; }
const TraceOptions &TraceEngine::options() const { return impl_->opt; }

void TraceEngine::set_transmitter(const Node &tx)
{
    Impl &im = *impl_;
    im.tx_node = tx;
    im.tx_gain_dbi = antenna_gain_dbi(tx.antenna, 0.0);
    im.tx_view = im.build_tx_view(tx.position, im.fine);
    im.tx_ready = true;
}

std::vector<PropagationPath> TraceEngine::trace(const Node &tx, const Node &rx,
                                                bool parallel) const
{
    const Impl &im = *impl_;
    if (tx.position == rx.position)
        throw ValidationError("trace: tx and rx coincide");

    // Antennas are ideally pointed along each path, so both ends always
    // contribute their boresight gain.
    double gtx = antenna_gain_dbi(tx.antenna, 0.0);
    double grx = antenna_gain_dbi(rx.antenna, 0.0);

    std::vector<PropagationPath> paths;

    // Line of sight.
    if (!im.leg_blocked(tx.position, rx.position, -1, -1))
    {
        double d = distance(tx.position, rx.position);
        PropagationPath p;
        p.hops = {tx.position, rx.position};
        p.length_m = d;
        p.delay_s = d / kSpeedOfLight;
        p.gain.gain_db.resize(im.f_ghz.size());
        for (size_t j = 0; j < im.f_ghz.size(); ++j)
            p.gain.gain_db[j] = gtx + grx - (20.0 * std::log10(d) + im.fspl_const[j]) -
                                kDbPerNeper * im.k_per_m[j] * d;
        if (path_received_dbm(p, im.cfg) >= im.opt.power_floor_dbm)
            paths.push_back(std::move(p));
    }

    int nthreads = parallel ? im.thread_count() : 1;
    (void)nthreads;

    // First order: one candidate slot per fine segment, written independently
    // and compacted in segment order afterwards, so the result does not
    // depend on the thread count.
    if (im.opt.max_order >= 1 && !im.fine.empty())
    {
        std::vector<TxSegView> view = im.build_tx_view(tx.position, im.fine);
        std::vector<RawRec> slots(im.fine.size());
        auto body = [&](size_t s, std::vector<double> &bil, std::vector<double> &energy) {
            std::vector<double> gain;
            double length = 0.0;
            if (!im.first_order_gain(view[s], im.fine[s], rx.position, gtx, grx, bil, energy,
                                     gain, length))
                return;
            RawRec &r = slots[s];
            r.total_dbm = im.total_received_dbm(gain);
            if (r.total_dbm < im.opt.power_floor_dbm)
                return;
            r.viable = true;
            r.seg1 = static_cast<int>(s);
            r.length = length;
            r.gain_db = std::move(gain);
        };
        if (parallel)
        {
#ifdef _OPENMP
#pragma omp parallel num_threads(nthreads)
            {
                std::vector<double> bil, energy;
#pragma omp for schedule(static)
                for (long long s = 0; s < static_cast<long long>(im.fine.size()); ++s)
                    body(static_cast<size_t>(s), bil, energy);
            }
#else
            std::vector<double> bil, energy;
            for (size_t s = 0; s < im.fine.size(); ++s)
                body(s, bil, energy);
#endif
        }
        else
        {
            std::vector<double> bil, energy;
            for (size_t s = 0; s < im.fine.size(); ++s)
                body(s, bil, energy);
        }
        for (const RawRec &r : slots)
        {
            if (!r.viable)
                continue;
            const FlatSegment &seg = im.fine[static_cast<size_t>(r.seg1)];
            PropagationPath p;
            p.hops = {tx.position, seg.center, rx.position};
            p.surface_trace = {im.scene.surfaces[static_cast<size_t>(seg.surface)].id};
            p.length_m = r.length;
            p.delay_s = r.length / kSpeedOfLight;
            p.gain.gain_db = r.gain_db;
            paths.push_back(std::move(p));
        }
    }

    // Second order: rows indexed by the first segment, each row filled
    // serially by one worker, rows concatenated in order.
    if (im.opt.max_order >= 2 && !im.coarse.empty())
    {
        std::vector<TxSegView> view = im.build_tx_view(tx.position, im.coarse);
        std::vector<std::vector<RawRec>> rows(im.coarse.size());
        auto row_body = [&](size_t s1, std::vector<double> &bil, std::vector<double> &e1,
                            std::vector<double> &e2) {
            if (!view[s1].visible)
                return;
            std::vector<RawRec> &row = rows[s1];
            for (size_t s2 = 0; s2 < im.coarse.size(); ++s2)
            {
                std::vector<double> gain;
                double length = 0.0;
                if (!im.second_order_gain(view[s1], im.coarse[s1], im.coarse[s2], rx.position,
                                          gtx, grx, bil, e1, e2, gain, length))
                    continue;
                RawRec r;
                r.total_dbm = im.total_received_dbm(gain);
                if (r.total_dbm < im.opt.power_floor_dbm)
                    continue;
                r.viable = true;
                r.seg1 = static_cast<int>(s1);
                r.seg2 = static_cast<int>(s2);
                r.length = length;
                r.gain_db = std::move(gain);
                row.push_back(std::move(r));
            }
        };
        if (parallel)
        {
#ifdef _OPENMP
#pragma omp parallel num_threads(nthreads)
            {
                std::vector<double> bil, e1, e2;
#pragma omp for schedule(static)
                for (long long s1 = 0; s1 < static_cast<long long>(im.coarse.size()); ++s1)
                    row_body(static_cast<size_t>(s1), bil, e1, e2);
            }
#else
            std::vector<double> bil, e1, e2;
            for (size_t s1 = 0; s1 < im.coarse.size(); ++s1)
                row_body(s1, bil, e1, e2);
#endif
        }
        else
        {
            std::vector<double> bil, e1, e2;
            for (size_t s1 = 0; s1 < im.coarse.size(); ++s1)
                row_body(s1, bil, e1, e2);
        }
        for (const auto &row : rows)
            for (const RawRec &r : row)
            {
                const FlatSegment &a = im.coarse[static_cast<size_t>(r.seg1)];
                const FlatSegment &b = im.coarse[static_cast<size_t>(r.seg2)];
                PropagationPath p;
                p.hops = {tx.position, a.center, b.center, rx.position};
                p.surface_trace = {im.scene.surfaces[static_cast<size_t>(a.surface)].id,
                                   im.scene.surfaces[static_cast<size_t>(b.surface)].id};
                p.length_m = r.length;
                p.delay_s = r.length / kSpeedOfLight;
                p.gain.gain_db = r.gain_db;
                paths.push_back(std::move(p));
            }
    }

    std::stable_sort(paths.begin(), paths.end(),
                     [](const PropagationPath &a, const PropagationPath &b) {
                         if (a.delay_s != b.delay_s)
                             return a.delay_s < b.delay_s;
                         return a.surface_trace < b.surface_trace;
                     });
    return paths;
}

TraceEngine::SinglePick TraceEngine::best_first_order(const Vec3 &rx_pos,
                                                      const AntennaSpec &rx_antenna,
                                                      bool exclude_los) const
{
    const Impl &im = *impl_;
    if (!im.tx_ready)
        throw ValidationError("best_first_order: set_transmitter was not called");
    double grx = antenna_gain_dbi(rx_antenna, 0.0);

    SinglePick best;
    if (!exclude_los && !(rx_pos == im.tx_node.position) &&
        !im.leg_blocked(im.tx_node.position, rx_pos, -1, -1))
    {
        double d = distance(im.tx_node.position, rx_pos);
        std::vector<double> gain(im.f_ghz.size());
        for (size_t j = 0; j < im.f_ghz.size(); ++j)
            gain[j] = im.tx_gain_dbi + grx - (20.0 * std::log10(d) + im.fspl_const[j]) -
                      kDbPerNeper * im.k_per_m[j] * d;
        double total = im.total_received_dbm(gain);
        if (total >= im.opt.power_floor_dbm)
        {
            best.found = true;
            best.los = true;
            best.total_dbm = total;
            best.length_m = d;
            best.gain_db = std::move(gain);
        }
    }

    if (im.opt.max_order >= 1)
    {
        // Per-surface accumulators, filled in fixed segment order so the
        // result is independent of how callers parallelize over receivers.
        size_t nsurf = im.scene.surfaces.size();
        size_t nsub = im.f_ghz.size();
        std::vector<std::vector<double>> sum_lin(nsurf);
        std::vector<double> strongest_dbm(nsurf, -INFINITY);
        std::vector<double> strongest_len(nsurf, 0.0);

        std::vector<double> bil, energy, gain;
        for (size_t s = 0; s < im.fine.size(); ++s)
        {
            double length = 0.0;
            if (!im.first_order_gain(im.tx_view[s], im.fine[s], rx_pos, im.tx_gain_dbi, grx,
                                     bil, energy, gain, length))
                continue;
            double total = im.total_received_dbm(gain);
            if (total < im.opt.power_floor_dbm)
                continue;
            size_t surf = static_cast<size_t>(im.fine[s].surface);
            std::vector<double> &acc = sum_lin[surf];
            if (acc.empty())
                acc.assign(nsub, 0.0);
            for (size_t j = 0; j < nsub; ++j)
                acc[j] += db_to_linear(gain[j]);
            if (total > strongest_dbm[surf])
            {
                strongest_dbm[surf] = total;
                strongest_len[surf] = length;
            }
        }
        for (size_t surf = 0; surf < nsurf; ++surf)
        {
            const std::vector<double> &acc = sum_lin[surf];
            if (acc.empty())
                continue;
            double lin = 0.0;
            for (double v : acc)
                lin += v;
            double total = im.sub_tx_dbm + linear_to_db(lin);
            if (total <= best.total_dbm)
                continue;
            best.found = true;
            best.los = false;
            best.surface = im.scene.surfaces[surf].id;
            best.total_dbm = total;
            best.length_m = strongest_len[surf];
            best.gain_db.resize(nsub);
            for (size_t j = 0; j < nsub; ++j)
                best.gain_db[j] = linear_to_db(acc[j]);
        }
    }
    return best;
}

TraceEngine::SinglePick best_surface_group(std::span<const PropagationPath> paths,
                                           const RadioConfig &cfg, bool exclude_los)
{
    TraceEngine::SinglePick best;
    std::map<std::string, std::vector<double>> sum_lin;
    std::map<std::string, std::pair<double, double>> strongest; // total_dbm, length
    for (const PropagationPath &p : paths)
    {
        if (p.is_los())
        {
            if (!exclude_los)
            {
                best.found = true;
                best.los = true;
                best.total_dbm = path_received_dbm(p, cfg);
                best.length_m = p.length_m;
                best.gain_db = p.gain.gain_db;
            }
            continue;
        }
        const std::string &id = p.surface_trace.front();
        std::vector<double> &acc = sum_lin[id];
        if (acc.empty())
            acc.assign(p.gain.gain_db.size(), 0.0);
        for (size_t j = 0; j < p.gain.gain_db.size(); ++j)
            acc[j] += db_to_linear(p.gain.gain_db[j]);
        double total = path_received_dbm(p, cfg);
        auto [it, inserted] = strongest.try_emplace(id, total, p.length_m);
        if (!inserted && total > it->second.first)
            it->second = {total, p.length_m};
    }
    for (const auto &[id, acc] : sum_lin)
    {
        double lin = 0.0;
        for (double v : acc)
            lin += v;
        double total = cfg.subband_tx_power_dbm() + linear_to_db(lin);
        if (total <= best.total_dbm)
            continue;
        best.found = true;
        best.los = false;
        best.surface = id;
        best.total_dbm = total;
        best.length_m = strongest[id].second;
        best.gain_db.resize(acc.size());
        for (size_t j = 0; j < acc.size(); ++j)
            best.gain_db[j] = linear_to_db(acc[j]);
    }
    if (!best.found)
        throw ValidationError("best_surface_group: no candidate path");
    return best;
}

std::vector<PropagationPath> trace_paths(const Scene &scene, const Node &tx, const Node &rx,
                                         const RadioConfig &cfg, const MaterialLibrary &materials,
                                         const AbsorptionTable &absorption,
                                         const TraceOptions &options)
{
    TraceEngine engine(scene, cfg, materials, absorption, options);
    return engine.trace(tx, rx, true);
}

std::vector<PropagationPath> trace_paths_serial(const Scene &scene, const Node &tx,
                                                const Node &rx, const RadioConfig &cfg,
                                                const MaterialLibrary &materials,
                                                const AbsorptionTable &absorption,
                                                const TraceOptions &options)
{
    TraceEngine engine(scene, cfg, materials, absorption, options);
    return engine.trace(tx, rx, false);
}

PowerDelayProfile build_pdp(std::span<const PropagationPath> paths, double bin_width_s,
                            double frequency_ghz, const RadioConfig &cfg)
{
    if (!(bin_width_s > 0.0))
        throw ValidationError("build_pdp: bin width must be positive");
    PowerDelayProfile pdp;
    pdp.bin_width_s = bin_width_s;
    pdp.frequency_ghz = frequency_ghz;

    size_t nbins = 0;
    for (const PropagationPath &p : paths)
        nbins = std::max(nbins, static_cast<size_t>(p.delay_s / bin_width_s) + 1);

    std::vector<double> agg_mw(nbins, 0.0);
    std::map<std::string, std::vector<double>> per_mw;
    double n = static_cast<double>(cfg.subband_count);
    for (const PropagationPath &p : paths)
    {
        size_t bin = static_cast<size_t>(p.delay_s / bin_width_s);
        double avg_mw = db_to_linear(path_received_dbm(p, cfg)) / n;
        agg_mw[bin] += avg_mw;
        if (!p.is_los())
        {
            auto [it, inserted] = per_mw.try_emplace(p.surface_trace.front());
            if (inserted)
                it->second.assign(nbins, 0.0);
            it->second[bin] += avg_mw;
        }
    }

    auto to_dbm = [](const std::vector<double> &mw) {
        std::vector<double> dbm(mw.size(), -INFINITY);
        for (size_t i = 0; i < mw.size(); ++i)
            if (mw[i] > 0.0)
                dbm[i] = linear_to_db(mw[i]);
        return dbm;
    };
    pdp.bins_dbm = to_dbm(agg_mw);
    for (const auto &[id, series] : per_mw)
        pdp.per_surface_dbm.emplace(id, to_dbm(series));
    return pdp;
}

const PropagationPath &best_path(std::span<const PropagationPath> paths, bool exclude_los)
{
    const PropagationPath *best = nullptr;
    double best_gain = -INFINITY;
    for (const PropagationPath &p : paths)
    {
        if (exclude_los && p.is_los())
            continue;
        double g = p.gain.total_gain_db();
        if (!best || g > best_gain ||
            (g == best_gain && (p.delay_s < best->delay_s ||
                                (p.delay_s == best->delay_s &&
                                 p.surface_trace < best->surface_trace))))
        {
            best = &p;
            best_gain = g;
        }
    }
    if (!best)
        throw ValidationError("best_path: no candidate path");
    return *best;
}

void write_pdp_csv(const PowerDelayProfile &pdp, std::ostream &out)
{
    out << "delay_ns,surface,power_dbm\n";
    for (size_t bin = 0; bin < pdp.bins_dbm.size(); ++bin)
    {
        std::vector<std::pair<std::string, double>> rows;
        if (std::isfinite(pdp.bins_dbm[bin]))
            rows.emplace_back("ALL", pdp.bins_dbm[bin]);
        for (const auto &[id, series] : pdp.per_surface_dbm)
            if (bin < series.size() && std::isfinite(series[bin]))
                rows.emplace_back(id, series[bin]);
        std::sort(rows.begin(), rows.end());
        double delay_ns = static_cast<double>(bin) * pdp.bin_width_s * 1e9;
        for (const auto &[name, dbm] : rows)
            out << format_number(delay_ns) << ',' << name << ',' << format_number(dbm) << '\n';
    }
}

} // namespace terasim
