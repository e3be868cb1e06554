#include "wavespeed/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "wavespeed/runner.hpp"
#include "wavespeed/stepper.hpp"

namespace wavespeed {

int AxisRange::count() const
{
    return static_cast<int>(std::floor((max - min) / step + 1e-9)) + 1;
}

void AxisRange::validate(const char* name) const
{
    if (step <= 0.0)
        throw std::invalid_argument(std::string(name) + " range step must be positive");
    if (max < min)
        throw std::invalid_argument(std::string(name) + " range max must be >= min");
}

void SweepPlan::validate() const
{
    d.validate("d");
    k.validate("k");
    if (appendix_protocol && (d.min < 1.0 || k.min < 1.0))
        throw std::invalid_argument("appendix protocol sweeps require d, k >= 1");
    if (dx <= 0.0 || dt <= 0.0 || domain_length <= 0.0 || t_final <= 0.0)
        throw std::invalid_argument("plan discretization parameters must be positive");
    if (window_start >= window_end || window_end > t_final)
        throw std::invalid_argument("speed window must lie inside the run duration");
}

std::uint64_t SweepPlan::hash() const
{
    char buf[320];
    std::snprintf(buf, sizeof(buf),
                  "%.17g|%.17g|%.17g|%.17g|%.17g|%.17g|%d|%.17g|%.17g|%.17g|%.17g|%.17g|%.17g",
                  d.min, d.max, d.step, k.min, k.max, k.step, appendix_protocol ? 1 : 0,
                  domain_length, dx, dt, t_final, window_start, window_end);
    // FNV-1a
    std::uint64_t h = 1469598103934665603ull;
    for (const char* p = buf; *p; ++p) {
        h ^= static_cast<unsigned char>(*p);
        h *= 1099511628211ull;
    }
    return h;
}

double SweepResult::speed(int ik, int id) const
{
    const CellResult& c = cell(ik, id);
    if (c.failed || (c.estimate.flags & flag::NoCrossing))
        return std::numeric_limits<double>::quiet_NaN();
    return c.estimate.speed;
}

namespace {

SpeedEstimate attempt_single(double d, double k, const SweepPlan& plan, double length)
{
    RunSetup setup;
    const RescaledModel rescaled = apply_appendix_rescaling(ModelSpec::symmetric_lv(k, d));
    setup.spec = rescaled.spec;
    setup.rescale_factor = rescaled.speed_factor;
    setup.grid = Grid1D::make(length, plan.dx);
    setup.stepper = StepperConfig{plan.dt, true};
    setup.t_final = plan.t_final;

    const RunOutput run = simulate_front(setup);

    std::size_t in_window = 0;
    for (const auto& s : run.trace.samples)
        if (s.first >= plan.window_start - 1e-12 && s.first <= plan.window_end + 1e-12)
            ++in_window;
    if (in_window < 5) {
        SpeedEstimate est;
        est.speed = std::numeric_limits<double>::quiet_NaN();
        est.flags = flag::NoCrossing;
        est.t_start = plan.window_start;
        est.t_end = plan.window_end;
        return est;
    }
    return estimate_speed(run.trace, plan.window_start, plan.window_end, setup.rescale_factor);
}

}  // namespace

SpeedEstimate run_single(double d, double k, const SweepPlan& plan)
{
    if (d < 1.0 || k < 0.0)
        throw std::invalid_argument("run_single expects d >= 1 and k >= 0");
    double length = plan.domain_length;
    unsigned guard_flags = 0;
    for (;;) {
        SpeedEstimate est = attempt_single(d, k, plan, length);
        const bool crossed = !(est.flags & flag::NoCrossing);
        // A missing crossing usually means the front escaped before the
        // window opened; a larger domain distinguishes that from no front.
        if ((!crossed || est.boundary_margin < 2.0) && length < 160.0) {
            length *= 2.0;
            guard_flags |= flag::BoundaryTooClose;
            continue;
        }
        est.flags |= guard_flags;
        return est;
    }
}

namespace {

using nlohmann::json;

json cell_to_json(std::size_t index, const CellResult& c)
{
    json j;
    j["i"] = index;
    j["failed"] = c.failed;
    if (c.failed) {
        j["failure"] = c.failure;
    } else {
        const SpeedEstimate& e = c.estimate;
        j["speed"] = e.speed;
        j["residual_rms"] = e.residual_rms;
        j["t_start"] = e.t_start;
        j["t_end"] = e.t_end;
        j["boundary_margin"] = e.boundary_margin;
        j["flags"] = flag::to_string(e.flags);
        j["wobble"] = e.wobble;
        j["pinned"] = e.pinned;
    }
    return j;
}

CellResult cell_from_json(const json& j)
{
    CellResult c;
    c.failed = j.at("failed").get<bool>();
    if (c.failed) {
        c.failure = j.at("failure").get<std::string>();
    } else {
        SpeedEstimate& e = c.estimate;
        e.speed = j.at("speed").get<double>();
        e.residual_rms = j.at("residual_rms").get<double>();
        e.t_start = j.at("t_start").get<double>();
        e.t_end = j.at("t_end").get<double>();
        e.boundary_margin = j.at("boundary_margin").get<double>();
        e.flags = flag::from_string(j.at("flags").get<std::string>());
        e.wobble = j.at("wobble").get<double>();
        e.pinned = j.at("pinned").get<bool>();
    }
    return c;
}

void write_checkpoint(const std::string& path, std::uint64_t plan_hash,
                      const std::vector<CellResult>& cells, const std::vector<char>& done)
{
    json j;
    j["plan_hash"] = plan_hash;
    json arr = json::array();
    for (std::size_t i = 0; i < cells.size(); ++i)
        if (done[i])
            arr.push_back(cell_to_json(i, cells[i]));
    j["cells"] = std::move(arr);

    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out)
            throw std::runtime_error("cannot open checkpoint file: " + tmp);
        out << j.dump();
        if (!out)
            throw std::runtime_error("checkpoint write failed: " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

void load_checkpoint(const std::string& path, std::uint64_t plan_hash,
                     std::vector<CellResult>& cells, std::vector<char>& done)
{
    std::ifstream in(path);
    if (!in)
        return;
    json j = json::parse(in);
    if (j.at("plan_hash").get<std::uint64_t>() != plan_hash)
        throw std::runtime_error("checkpoint plan hash mismatch: " + path);
    for (const auto& jc : j.at("cells")) {
        const auto i = jc.at("i").get<std::size_t>();
        if (i >= cells.size())
            throw std::runtime_error("checkpoint cell index out of range: " + path);
        cells[i] = cell_from_json(jc);
        done[i] = 1;
    }
}

}  // namespace

SweepResult run_sweep(const SweepPlan& plan, int worker_count, const std::string& checkpoint_path)
{
    plan.validate();
    if (worker_count < 1)
        throw std::invalid_argument("worker_count must be at least 1");

    const auto t_begin = std::chrono::steady_clock::now();

    SweepResult result;
    result.plan = plan;
    result.plan_hash = plan.hash();
    const int nd = plan.d.count();
    const int nk = plan.k.count();
    const std::size_t total = static_cast<std::size_t>(nd) * nk;
    result.cells.assign(total, CellResult{});

    std::vector<char> done(total, 0);
    if (!checkpoint_path.empty() && std::filesystem::exists(checkpoint_path))
        load_checkpoint(checkpoint_path, result.plan_hash, result.cells, done);

    std::vector<std::size_t> pending;
    pending.reserve(total);
    for (std::size_t i = 0; i < total; ++i)
        if (!done[i])
            pending.push_back(i);

    std::atomic<std::size_t> next{0};
    std::mutex io_mutex;
    std::size_t completed_since_checkpoint = 0;
    std::exception_ptr failure;

    auto worker = [&]() {
        for (;;) {
            const std::size_t slot = next.fetch_add(1);
            if (slot >= pending.size())
                return;
            const std::size_t index = pending[slot];
            const int ik = static_cast<int>(index) / nd;
            const int id = static_cast<int>(index) % nd;

            CellResult cell;
            try {
                cell.estimate = run_single(plan.d.at(id), plan.k.at(ik), plan);
            } catch (const std::exception& e) {
                cell.failed = true;
                cell.failure = e.what();
            }
            result.cells[index] = std::move(cell);

            std::lock_guard<std::mutex> lock(io_mutex);
            done[index] = 1;
            ++completed_since_checkpoint;
            if (!checkpoint_path.empty() &&
                completed_since_checkpoint >= static_cast<std::size_t>(plan.checkpoint_interval)) {
                completed_since_checkpoint = 0;
                try {
                    write_checkpoint(checkpoint_path, result.plan_hash, result.cells, done);
                } catch (...) {
                    if (!failure)
                        failure = std::current_exception();
                    next.store(pending.size());
                    return;
                }
            }
        }
    };

    if (worker_count == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(worker_count);
        for (int w = 0; w < worker_count; ++w)
            threads.emplace_back(worker);
        for (auto& t : threads)
            t.join();
    }
    if (failure)
        std::rethrow_exception(failure);

    if (!checkpoint_path.empty())
        std::filesystem::remove(checkpoint_path);

    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin).count();
    return result;
}

namespace {

struct Chainer {
    std::vector<std::array<double, 2>> points;
    std::vector<std::array<std::size_t, 2>> segments;
    std::map<std::pair<long long, long long>, std::size_t> index;

    std::size_t intern(double x, double y)
    {
        const auto key = std::make_pair(static_cast<long long>(std::llround(x * 1e9)),
                                        static_cast<long long>(std::llround(y * 1e9)));
        auto [it, inserted] = index.try_emplace(key, points.size());
        if (inserted)
            points.push_back({x, y});
        return it->second;
    }

    void add(double x0, double y0, double x1, double y1)
    {
        const std::size_t a = intern(x0, y0);
        const std::size_t b = intern(x1, y1);
        if (a != b)
            segments.push_back({a, b});
    }

    std::vector<std::vector<std::array<double, 2>>> chain() const
    {
        std::vector<std::vector<std::size_t>> adjacency(points.size());
        for (std::size_t s = 0; s < segments.size(); ++s) {
            adjacency[segments[s][0]].push_back(s);
            adjacency[segments[s][1]].push_back(s);
        }
        std::vector<char> used(segments.size(), 0);
        std::vector<std::vector<std::array<double, 2>>> polylines;

        auto walk = [&](std::size_t start_seg, std::size_t start_point) {
            std::vector<std::array<double, 2>> line;
            std::size_t point = start_point;
            std::size_t seg = start_seg;
            line.push_back(points[point]);
            for (;;) {
                used[seg] = 1;
                point = (segments[seg][0] == point) ? segments[seg][1] : segments[seg][0];
                line.push_back(points[point]);
                std::size_t next_seg = segments.size();
                for (std::size_t s : adjacency[point])
                    if (!used[s]) {
                        next_seg = s;
                        break;
                    }
                if (next_seg == segments.size())
                    break;
                seg = next_seg;
            }
            polylines.push_back(std::move(line));
        };

        // Open chains first, anchored at degree-1 endpoints.
        for (std::size_t p = 0; p < points.size(); ++p) {
            std::size_t unused_here = 0;
            std::size_t first = segments.size();
            for (std::size_t s : adjacency[p])
                if (!used[s]) {
                    ++unused_here;
                    if (first == segments.size())
                        first = s;
                }
            if (unused_here == 1)
                walk(first, p);
        }
        // Remaining segments form closed loops.
        for (std::size_t s = 0; s < segments.size(); ++s)
            if (!used[s])
                walk(s, segments[s][0]);
        return polylines;
    }
};

}  // namespace

ContourSet extract_contours(const std::vector<std::vector<double>>& values,
                            const std::vector<double>& d_axis, const std::vector<double>& k_axis,
                            const std::vector<double>& levels)
{
    const int nk = static_cast<int>(k_axis.size());
    const int nd = static_cast<int>(d_axis.size());

    ContourSet out;
    out.levels = levels;
    out.polylines.resize(levels.size());

    for (std::size_t li = 0; li < levels.size(); ++li) {
        const double level = levels[li];
        Chainer chainer;

        for (int ik = 0; ik + 1 < nk; ++ik) {
            for (int id = 0; id + 1 < nd; ++id) {
                const double va = values[ik][id];        // (x0, y0)
                const double vb = values[ik][id + 1];    // (x1, y0)
                const double vc = values[ik + 1][id + 1];  // (x1, y1)
                const double vd = values[ik + 1][id];    // (x0, y1)
                if (!std::isfinite(va) || !std::isfinite(vb) || !std::isfinite(vc) ||
                    !std::isfinite(vd))
                    continue;  // masked cell

                const double x0 = d_axis[id], x1 = d_axis[id + 1];
                const double y0 = k_axis[ik], y1 = k_axis[ik + 1];

                int mask = 0;
                if (va > level) mask |= 1;
                if (vb > level) mask |= 2;
                if (vc > level) mask |= 4;
                if (vd > level) mask |= 8;
                if (mask == 0 || mask == 15)
                    continue;

                const auto lerp = [level](double p, double q, double vp, double vq) {
                    return p + (level - vp) / (vq - vp) * (q - p);
                };
                // Edge crossing points.
                const double bx = lerp(x0, x1, va, vb), by = y0;       // bottom
                const double rx = x1, ry = lerp(y0, y1, vb, vc);       // right
                const double tx = lerp(x0, x1, vd, vc), ty = y1;       // top
                const double lx = x0, ly = lerp(y0, y1, va, vd);       // left

                switch (mask) {
                case 1: case 14: chainer.add(lx, ly, bx, by); break;
                case 2: case 13: chainer.add(bx, by, rx, ry); break;
                case 3: case 12: chainer.add(lx, ly, rx, ry); break;
                case 4: case 11: chainer.add(rx, ry, tx, ty); break;
                case 6: case 9: chainer.add(bx, by, tx, ty); break;
                case 7: case 8: chainer.add(lx, ly, tx, ty); break;
                case 5: case 10: {
                    const double center = 0.25 * (va + vb + vc + vd);
                    const bool connect_low = (mask == 5) == (center > level);
                    if (connect_low) {
                        chainer.add(lx, ly, tx, ty);
                        chainer.add(bx, by, rx, ry);
                    } else {
                        chainer.add(lx, ly, bx, by);
                        chainer.add(rx, ry, tx, ty);
                    }
                    break;
                }
                default: break;
                }
            }
        }
        out.polylines[li] = chainer.chain();
    }
    return out;
}

ContourSet extract_contours(const SweepResult& result, const std::vector<double>& levels)
{
    const int nd = result.nd();
    const int nk = result.nk();
    std::vector<double> d_axis(nd), k_axis(nk);
    for (int i = 0; i < nd; ++i)
        d_axis[i] = result.plan.d.at(i);
    for (int i = 0; i < nk; ++i)
        k_axis[i] = result.plan.k.at(i);
    std::vector<std::vector<double>> values(nk, std::vector<double>(nd));
    for (int ik = 0; ik < nk; ++ik)
        for (int id = 0; id < nd; ++id)
            values[ik][id] = result.speed(ik, id);
    return extract_contours(values, d_axis, k_axis, levels);
}

}  // namespace wavespeed
