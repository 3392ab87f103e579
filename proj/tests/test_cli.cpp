#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <sys/wait.h>

#include "rlnc/generators.hpp"
#include "rlnc/network.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const fs::path& workdir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("rlnc_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

Run cli(const std::string& args) {
  const auto out = workdir() / "stdout", err = workdir() / "stderr";
  const std::string cmd = std::string(RLNC_CLI_PATH) + " " + args + " >" + out.string() + " 2>" + err.string();
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

std::string net_file(const std::string& name, const rlnc::Network& net) {
  const auto path = workdir() / name;
  rlnc::save_network(net, path.string());
  return path.string();
}

const json* find_bound(const json& report, const std::string& id) {
  for (const auto& b : report["bounds"])
    if (b["bound_id"] == id) return &b;
  return nullptr;
}

}  // namespace

TEST_CASE("analyze butterfly over GF(16)") {
  const auto bf = net_file("bf.json", rlnc::gen_butterfly());
  const auto r = cli("analyze --network " + bf + " --rate 2 --field 16");
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  for (const char* id : {"thm1", "thm2", "thm4", "thm6:t1", "thm7:t1", "thm6:t2", "thm7:t2"}) {
    CAPTURE(id);
    const auto* b = find_bound(j, id);
    REQUIRE(b);
    CHECK((*b)["valid"] == true);
  }
  CHECK((*find_bound(j, "thm2"))["inputs"]["S"] == 8);
  CHECK(j["cuts"]["R"] == 4);
  CHECK(j["cuts"]["sum_r"] == 8);
  CHECK(j["topology"]["internal_nodes"] == 4);
  CHECK(j["cuts"]["profiles"]["t1"] == json::array({0, 1, 1, 1, 1}));
  const auto& lower = j["lower_bounds"];
  CHECK(lower.dump().find("\"16\"") != std::string::npos);
  const auto* lb = find_bound(j, "lower");
  REQUIRE(lb);
  CHECK((*lb)["numerator"] == "1");
  CHECK((*lb)["denominator"] == "16");
  CHECK(r.out == cli("analyze --network " + bf + " --rate 2 --field 16").out);
}

TEST_CASE("analyze flags invalid bounds and explains cuts") {
  const auto bf = net_file("bf.json", rlnc::gen_butterfly());
  const auto r = cli("analyze --network " + bf + " --rate 2 --field 2 --explain");
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  const auto* t1 = find_bound(j, "thm1");
  CHECK((*t1)["valid"] == false);
  CHECK((*t1)["probability"].is_null());
  CHECK((*t1)["numerator"] == "16375");
  CHECK((*t1)["denominator"] == "16384");
  const auto explain = j["explain"].dump();
  CHECK(explain.find("CUT_{1,2}={e3,e2}, CUT_{1,2}^out={e3}") != std::string::npos);

  const auto csv = cli("analyze --network " + bf + " --rate 2 --field 2 --explain --format csv");
  REQUIRE(csv.code == 0);
  CHECK(csv.out.rfind("# ", 0) == 0);
  CHECK(csv.out.find("bound_id,numerator,denominator,float,valid,inputs\n") != std::string::npos);
  CHECK(csv.out.find("thm1,16375,16384,") != std::string::npos);
}

TEST_CASE("analyze plait tightness and strategies") {
  const auto p = net_file("p21.json", rlnc::gen_plait(2, 1));
  const auto r = cli("analyze --network " + p + " --rate 2 --field 2");
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  const auto* t7 = find_bound(j, "thm7:t");
  REQUIRE(t7);
  CHECK((*t7)["numerator"] == "55");
  CHECK((*t7)["denominator"] == "64");
  CHECK((*t7)["tight"] == true);

  const auto bf = net_file("bf.json", rlnc::gen_butterfly());
  const auto mi = cli("analyze --network " + bf + " --rate 2 --field 256 --paths min-internal --n 9 --m 5");
  REQUIRE(mi.code == 0);
  const auto k = json::parse(mi.out);
  REQUIRE(find_bound(k, "cor1"));
  CHECK((*find_bound(k, "cor1"))["inputs"]["certified"] == true);
  CHECK(find_bound(k, "thm3"));
  CHECK((*find_bound(k, "thm4"))["inputs"]["m"] == 5);
  CHECK(cli("analyze --network " + bf + " --rate 2 --n 3").code == 2);
}

TEST_CASE("capacity and usage errors") {
  const auto bf = net_file("bf.json", rlnc::gen_butterfly());
  const auto cap = cli("analyze --network " + bf + " --rate 3");
  CHECK(cap.code == 3);
  const auto err = json::parse(cap.err);
  CHECK(err["error"] == "capacity");
  CHECK(err["sink"] == "t1");
  CHECK(err["capacity"] == 2);

  const auto en = cli("enumerate --network " + bf + " --rate 2 --field 5");
  CHECK(en.code == 3);
  CHECK(json::parse(en.err)["required"] == "244140625");

  CHECK(cli("analyze --network " + bf + " --rate 2 --field 6").code == 2);
  CHECK(cli("simulate --network " + bf + " --rate 2 --trials 0").code == 2);
  CHECK(cli("analyze --network " + (workdir() / "missing.json").string() + " --rate 2").code == 2);
  CHECK(cli("analyze --rate 2").code == 2);
  CHECK(cli("frobnicate").code == 2);
  CHECK(cli("analyze --network " + bf + " --rate 2 --format xml").code == 2);
  CHECK_FALSE(json::parse(cli("frobnicate").err)["error"].is_null());

  const auto cyc = workdir() / "cyc.json";
  std::ofstream(cyc) << R"({"name":"c","nodes":["s","a","t"],"source":"s","sinks":["t"],
    "channels":[{"id":"x1","tail":"s","head":"a"},{"id":"x2","tail":"a","head":"a"},{"id":"x3","tail":"a","head":"t"}]})";
  const auto v = cli("analyze --network " + cyc.string() + " --rate 1");
  CHECK(v.code == 2);
  CHECK(json::parse(v.err)["error"] == "validation");

  const auto dup = workdir() / "dup.json";
  std::ofstream(dup) << R"({"name":"d","nodes":["s","t"],"source":"s","sinks":["t"],
    "channels":[{"id":"e1","tail":"s","head":"t"},{"id":"e1","tail":"s","head":"t"}]})";
  const auto d = cli("analyze --network " + dup.string() + " --rate 1");
  CHECK(d.code == 2);
  CHECK(json::parse(d.err)["location"] == "/channels/1/id");
}

TEST_CASE("simulate is deterministic across runs and workers") {
  const auto bf = net_file("bf.json", rlnc::gen_butterfly());
  const std::string base = "simulate --network " + bf + " --rate 2 --field 2 --trials 20000 --seed 7";
  const auto a = cli(base);
  REQUIRE(a.code == 0);
  CHECK(a.out == cli(base).out);
  CHECK(a.out == cli(base + " --workers 8").out);
  const auto j = json::parse(a.out);
  CHECK(j["trials"] == 20000);
  const auto csv = cli(base + " --format csv");
  CHECK(csv.code == 0);
  CHECK(csv.out == cli(base + " --format csv --workers 4").out);
}

TEST_CASE("enumerate") {
  const auto bf = net_file("bf.json", rlnc::gen_butterfly());
  const auto r = cli("enumerate --network " + bf + " --rate 2 --field 2");
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["assignments"] == 4096);
  CHECK(j["sinks"][0]["sink"] == "t1");
  CHECK(r.out.find("\"125\"") != std::string::npos);
  CHECK(r.out == cli("enumerate --network " + bf + " --rate 2 --field 2 --workers 3").out);
  const auto g2 = net_file("g2.json", rlnc::gen_plait_union(2, 1, 2));
  const auto csv = cli("enumerate --network " + g2 + " --rate 2 --field 2 --format csv");
  CHECK(csv.out.find("485,512") != std::string::npos);
}

TEST_CASE("generate") {
  const auto out = (workdir() / "g1.json").string();
  const auto r = cli("generate butterfly --out " + out);
  REQUIRE(r.code == 0);
  CHECK(rlnc::load_network(out) == rlnc::gen_butterfly());
  CHECK(json::parse(r.out)["channels"] == 9);

  const auto p = (workdir() / "p.json").string();
  REQUIRE(cli("generate plait --w 2 --r 3 --out " + p).code == 0);
  CHECK(rlnc::load_network(p).channel_count() == 8);

  const auto rnd = cli("generate random --layers 3 --width 4 --rate 2 --sinks 2 --seed 1");
  REQUIRE(rnd.code == 0);
  const auto net = rlnc::parse_network(rnd.out);
  CHECK(rlnc::validate_network(net).valid());
  for (const auto& t : net.sinks()) CHECK(rlnc::min_cut_capacity(net, t) >= 2);
  CHECK(rnd.out == cli("generate random --layers 3 --width 4 --rate 2 --sinks 2 --seed 1").out);

  CHECK(cli("generate plait --w 0 --r 1").code == 2);
  CHECK(cli("generate hexagon").code == 2);
}

TEST_CASE("sweep") {
  const auto r = cli("sweep --bound thm3 --n 8 --l 2 --rate 2 --fields 256,4096,65536");
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["limit"] == 10);
  double prev = 0;
  for (const auto& row : j["rows"]) {
    const double v = row["scaled"]["float"];
    CHECK(v > prev);
    CHECK(v < 10);
    prev = v;
  }
  CHECK(std::abs(prev - 10) / 10 < 0.01);

  const auto bf = net_file("bf.json", rlnc::gen_butterfly());
  const auto t4 = json::parse(cli("sweep --bound thm4 --network " + bf + " --rate 2 --fields 256,65536").out);
  CHECK(t4["limit"] == 10);
  const auto low = json::parse(cli("sweep --bound lower --delta 0 --fields 2,3,256").out);
  for (const auto& row : low["rows"]) CHECK(row["scaled"]["numerator"] == "1");

  CHECK(cli("sweep --bound thm3 --n 8 --l 2 --rate 2 --fields 6").code == 2);
  CHECK(cli("sweep --bound thm99 --fields 2").code == 2);
}
