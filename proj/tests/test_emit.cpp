#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "wavespeed/emit.hpp"

using namespace wavespeed;

namespace {

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string temp_file(const char* name)
{
    return (std::filesystem::temp_directory_path() / name).string();
}

SweepResult make_result()
{
    SweepResult r;
    r.plan.d = AxisRange{1.0, 2.0, 1.0};
    r.plan.k = AxisRange{1.0, 2.0, 1.0};
    r.plan_hash = r.plan.hash();
    r.cells.resize(4);
    r.cells[0].estimate.speed = 0.0;                                  // (ik 0, id 0)
    r.cells[1].estimate.speed = -0.6;                                 // (ik 0, id 1)
    r.cells[2].estimate.speed = -0.6;                                 // (ik 1, id 0)
    r.cells[2].estimate.flags = flag::BoundaryTooClose | flag::HighResidual;
    r.cells[3].estimate.speed = -1.2;                                 // (ik 1, id 1)
    return r;
}

}  // namespace

TEST_CASE("heatmap raster maps speeds linearly to gray levels")
{
    const SweepResult r = make_result();
    const std::string path = temp_file("heatmap_test.pgm");
    write_heatmap_pgm(r, path);
    const std::string bytes = slurp(path);
    const std::string header = "P5\n2 2\n255\n";
    REQUIRE(bytes.size() == header.size() + 4);
    CHECK(bytes.compare(0, header.size(), header) == 0);
    // top row is the larger k: speeds -0.6, -1.2; bottom row 0, -0.6
    const auto* px = reinterpret_cast<const unsigned char*>(bytes.data() + header.size());
    CHECK(px[0] == 128);
    CHECK(px[1] == 0);
    CHECK(px[2] == 255);
    CHECK(px[3] == 128);
    std::filesystem::remove(path);
}

TEST_CASE("heatmap of an all-failed sweep is an error")
{
    SweepResult r = make_result();
    for (auto& c : r.cells)
        c.failed = true;
    CHECK_THROWS_WITH_AS(write_heatmap_pgm(r, temp_file("unused.pgm")), "no finite cells",
                         std::runtime_error);
}

TEST_CASE("speeds and flags survive a csv round trip")
{
    SweepResult r = make_result();
    r.cells[1].failed = true;
    r.cells[1].failure = "blowup";
    r.cells[3].estimate.flags = flag::NoCrossing;
    const std::string speeds = temp_file("speeds_test.csv");
    const std::string flags = temp_file("flags_test.csv");
    write_speeds_csv(r, speeds);
    write_flags_csv(r, flags);

    const SweepResult back = read_sweep_csv(speeds, flags);
    CHECK(back.plan.d.count() == 2);
    CHECK(back.plan.k.count() == 2);
    CHECK(back.cells[0].estimate.speed == 0.0);
    CHECK(back.cells[1].failed);
    CHECK(back.cells[2].estimate.speed == -0.6);  // %.17g is lossless for doubles
    CHECK(back.cells[2].estimate.flags == (flag::BoundaryTooClose | flag::HighResidual));
    CHECK(back.cells[3].estimate.flags == flag::NoCrossing);
    CHECK(std::isnan(back.speed(1, 1)));  // NoCrossing masks the value
    CHECK(std::isnan(back.cells[3].estimate.speed));

    std::filesystem::remove(speeds);
    std::filesystem::remove(flags);
}

TEST_CASE("emitters are byte deterministic")
{
    const SweepResult r = make_result();
    const ContourSet cs = extract_contours(r, {-0.6});
    const std::string a = temp_file("emit_a"), b = temp_file("emit_b");
    write_speeds_csv(r, a);
    write_speeds_csv(r, b);
    CHECK(slurp(a) == slurp(b));
    write_heatmap_svg(r, cs, a);
    write_heatmap_svg(r, cs, b);
    CHECK(slurp(a) == slurp(b));
    write_contours_json(cs, a);
    write_contours_json(cs, b);
    CHECK(slurp(a) == slurp(b));
    std::filesystem::remove(a);
    std::filesystem::remove(b);
}

TEST_CASE("metadata records the plan")
{
    const SweepResult r = make_result();
    const std::string path = temp_file("metadata_test.json");
    write_metadata_json(r, path);
    const nlohmann::json j = nlohmann::json::parse(slurp(path));
    CHECK(j.at("plan_hash").get<std::uint64_t>() == r.plan_hash);
    CHECK(j.at("d").at("max").get<double>() == 2.0);
    CHECK(j.at("scheme").at("dx").get<double>() == 0.02);
    std::filesystem::remove(path);
}
