#include "wvpitch/evaluation.hpp"

#include <cmath>
#include <stdexcept>

namespace wvpitch::eval {

std::vector<FramePair> align(const PitchTrack& gt, const PitchTrack& est) {
    if (gt.frames.empty() || est.frames.empty())
        throw std::invalid_argument("align: empty track");
    const double gt_hop = gt.frames.size() > 1
                              ? (gt.frames.back().time - gt.frames.front().time) /
                                    static_cast<double>(gt.frames.size() - 1)
                              : gt.hop;
    if (gt_hop <= 0.0) throw std::invalid_argument("align: ground truth hop unknown");
    const double t0 = gt.frames.front().time;

    // drop slightly inside half a hop so frames at exactly half distance are
    // rejected regardless of rounding
    const double max_dist = 0.5 * gt_hop * (1.0 - 1e-9);

    std::vector<FramePair> pairs;
    pairs.reserve(est.frames.size());
    for (const auto& ef : est.frames) {
        const double pos = (ef.time - t0) / gt_hop;
        const long long idx = std::llround(pos);
        if (idx < 0 || idx >= static_cast<long long>(gt.frames.size())) continue;
        const auto& gf = gt.frames[static_cast<std::size_t>(idx)];
        if (std::abs(ef.time - gf.time) >= max_dist) continue;
        FramePair p;
        p.time = gf.time;
        p.gt_f0 = gf.f0;
        p.est_f0 = ef.f0;
        p.gt_voiced = gf.voiced;
        p.est_voiced = ef.voiced;
        pairs.push_back(p);
    }
    return pairs;
}

MaePve mae_pve(const std::vector<FramePair>& pairs) {
    std::vector<double> errs;
    errs.reserve(pairs.size());
    for (const auto& p : pairs)
        if (p.gt_voiced && p.est_voiced) errs.push_back(std::abs(*p.gt_f0 - *p.est_f0));
    if (errs.empty()) throw ProcessingError("mae_pve: no mutually voiced frames");

    MaePve out;
    for (double e : errs) out.mae += e;
    out.mae /= static_cast<double>(errs.size());
    double var = 0.0;
    for (double e : errs) var += (e - out.mae) * (e - out.mae);
    out.pve = std::sqrt(var / static_cast<double>(errs.size()));  // population convention
    return out;
}

FfeResult ffe(const std::vector<FramePair>& pairs) {
    if (pairs.empty()) throw std::invalid_argument("ffe: empty pairing");
    FfeResult out;
    for (const auto& p : pairs) {
        if (p.gt_voiced != p.est_voiced) {
            ++out.vde_count;
        } else if (p.gt_voiced && p.est_voiced) {
            if (std::abs(*p.est_f0 - *p.gt_f0) > 0.2 * *p.gt_f0) ++out.gpe_count;
        }
    }
    out.ffe_percent = 100.0 * static_cast<double>(out.gpe_count + out.vde_count) /
                      static_cast<double>(pairs.size());
    return out;
}

EvalReport evaluate(const PitchTrack& gt, const PitchTrack& est) {
    const auto pairs = align(gt, est);
    if (pairs.empty()) throw ProcessingError("evaluate: tracks do not overlap in time");
    const MaePve m = mae_pve(pairs);
    const FfeResult f = ffe(pairs);

    EvalReport r;
    r.mae_hz = m.mae;
    r.pve_hz = m.pve;
    r.ffe_percent = f.ffe_percent;
    r.gpe_count = f.gpe_count;
    r.vde_count = f.vde_count;
    r.total_frames = pairs.size();
    for (const auto& p : pairs)
        if (p.gt_voiced && p.est_voiced) ++r.compared_frames;
    return r;
}

}  // namespace wvpitch::eval
