#include "cli.hpp"

#include "ckn/classifier.hpp"
#include "ckn/serialize.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace ckn;

namespace {

struct Run {
  int code;
  std::string out, err;
  Json json() const { return Json::parse(out); }
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> flags(std::vector<std::string> head, const char* n, const char* p, const char* q, const char* r,
                               const char* a, const char* b, const char* c = nullptr) {
  for (auto [k, v] : {std::pair{"--n", n}, {"--p", p}, {"--q", q}, {"--r", r}, {"--a", a}, {"--b", b}, {"--c", c}})
    if (v) {
      head.push_back(k);
      head.push_back(v);
    }
  return head;
}

std::string temp_file(const std::string& name, const std::string& content) {
  auto path = std::filesystem::temp_directory_path() / ("ckn_test_" + name);
  std::ofstream(path) << content;
  return path.string();
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("classify examples") {
    auto r = run(flags({"classify"}, "3", "2", "2", "2", "0", "0", "0"));
    CHECK(r.code == 0);
    Json j = r.json();
    CHECK(j["decision"] == "Embeds");
    CHECK(j["case"] == "III");
    CHECK(j["params"]["c"] == "0");
    CHECK(j["derived"]["c0"] == "0");

    r = run(flags({"classify"}, "3", "2", "2", "7", "0", "0", "0"));
    CHECK(r.code == 1);
    CHECK(r.json()["reason"] == "ROutOfRange");

    r = run(flags({"classify", "--radial"}, "2", "2", "1", "2", "-2", "0", "-2"));
    CHECK(r.code == 0);
    CHECK(r.json()["case"] == "v");
    CHECK(r.json()["regime"] == "radial");
  }

  TEST_CASE("classify output is deterministic") {
    auto args = flags({"classify"}, "3", "3/2", "4", "5/2", "1/3", "-1/2", "-1");
    CHECK(run(args).out == run(args).out);
  }

  TEST_CASE("input errors name the flag") {
    auto r = run(flags({"classify"}, "3", "2", "2", "2", "0.5", "0", "0"));
    CHECK(r.code == 2);
    CHECK(r.err.find("--a") != std::string::npos);
    CHECK(r.err.find("num/den") != std::string::npos);

    r = run(flags({"classify"}, "3", "2", "2", "2", "0", "0"));
    CHECK(r.code == 2);
    CHECK(r.err.find("--c") != std::string::npos);

    r = run(flags({"classify"}, "3", "1/2", "2", "2", "0", "0", "0"));
    CHECK(r.code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({}).code == 2);
  }

  TEST_CASE("classify w0 and multiweight") {
    auto r = run(flags({"classify", "--w0"}, "3", "2", "2", "4", "0", "0", "-1"));
    CHECK(r.code == 0);
    CHECK(r.json()["decision"] == "Embeds");

    std::string path = temp_file("mw.json", R"({"n":3,"p":"2","q":"2","r":"2",
      "singularities":[{"a":"0","b":"0","c":"-1"},{"a":"1","b":"0","c":"-1"}],
      "infinity":{"a":"0","b":"0","c":"-1"}})");
    r = run({"classify", "--multiweight", path});
    CHECK(r.code == 0);
    CHECK(r.json()["decision"] == "Embeds");

    path = temp_file("mw_bad.json", R"({"n":3,"p":"2","q":"2","r":"0.5","singularities":[],"infinity":{}})");
    r = run({"classify", "--multiweight", path});
    CHECK(r.code == 2);
    CHECK(r.err.find("spec.r") != std::string::npos);
  }

  TEST_CASE("interval and theta") {
    auto r = run(flags({"interval"}, "3", "2", "2", "2", "0", "0"));
    CHECK(r.code == 0);
    Json iv = r.json()["admissible_set"]["interval"];
    CHECK(iv["lo"] == "-2");
    CHECK(iv["hi"] == "0");
    CHECK(iv["lo_included"] == true);
    CHECK(iv["hi_included"] == true);
    CHECK_FALSE(r.json()["params"].contains("c"));

    r = run(flags({"theta"}, "3", "2", "2", "2", "0", "0", "-1"));
    CHECK(r.code == 0);
    CHECK(r.json()["theta_set"]["kind"] == "Single");
    CHECK(r.json()["theta_set"]["theta"] == "1/2");

    r = run(flags({"theta"}, "2", "2", "2", "4", "-2", "0", "-2"));
    CHECK(r.code == 0);
    CHECK(r.json()["theta_set"]["kind"] == "Empty");
    CHECK(r.json()["theta_set"]["note"] == "embedding holds, multiplicative form impossible");

    r = run(flags({"theta"}, "3", "2", "2", "7", "0", "0", "0"));
    CHECK(r.code == 1);
    CHECK(r.json()["verdict"]["reason"] == "ROutOfRange");
  }

  TEST_CASE("verify") {
    auto r = run(flags({"verify"}, "3", "2", "2", "2", "-2", "0", "-2"));
    CHECK(r.code == 0);
    Json j = r.json();
    CHECK(j["theta"] == "1");
    CHECK(j["status"] == "Finite");
    CHECK(j["defect"].get<double>() < 1e-6);
    CHECK(j["per_member"].size() == 40);

    r = run(flags({"verify", "--theta", "1/3"}, "3", "2", "2", "2", "0", "0", "-1"));
    CHECK(r.code == 3);
    CHECK(r.json()["defect"].get<double>() > 1e-2);

    r = run(flags({"verify"}, "3", "2", "2", "2", "0", "0", "-1"));
    CHECK(r.code == 0);
    CHECK(r.json()["theta"] == "1/2");

    r = run(flags({"verify", "--harmonic"}, "3", "2", "2", "4", "0", "0", "-1"));
    CHECK(r.code == 0);

    r = run(flags({"verify"}, "3", "2", "2", "7", "0", "0", "0"));
    CHECK(r.code == 3);
    r = run(flags({"verify", "--theta", "3/2"}, "3", "2", "2", "2", "0", "0", "-1"));
    CHECK(r.code == 2);
  }

  TEST_CASE("falsify") {
    auto r = run(flags({"falsify"}, "3", "2", "1", "4", "0", "0", "9"));
    CHECK(r.code == 0);
    Json j = r.json();
    CHECK(j["verdict"]["reason"] == "EndpointC0WrongR");
    CHECK(j["status"] == "Falsified");
    REQUIRE(j["crossed_at"].is_number_integer());
    CHECK(j["crossed_at"].get<int>() <= 40);
    CHECK(j["params"]["c"] == "9");

    r = run(flags({"falsify"}, "3", "2", "2", "2", "0", "0", "0"));
    CHECK(r.code == 3);

    r = run(flags({"falsify", "--theta", "1/2"}, "2", "2", "2", "4", "-2", "0", "-2"));
    CHECK(r.code == 0);
    CHECK(r.json()["status"] == "Falsified");

    r = run(flags({"falsify", "--theta", "1/2"}, "3", "2", "2", "2", "0", "0", "-1"));
    CHECK(r.code == 3);
  }

  TEST_CASE("sweep matches interval") {
    std::string path = temp_file("sweep.json", R"({"fixed":{"n":3,"p":2,"q":2,"r":2,"a":0,"b":0},
      "axes":[{"name":"c","start":"-3","stop":"1","step":"1/100"}]})");
    auto r = run({"sweep", path});
    CHECK(r.code == 0);
    auto rows = lines(r.out);
    REQUIRE(rows.size() == 402);
    CHECK(rows[0] == "n,p,q,r,a,b,c,decision,case,reason,c0,c1,theta_c");
    AdmissibleSet set = admissible_set(Params{3, 2, 2, 2, 0, 0, 0});
    int embeds = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      Rational c = Rational(-3) + Rational(static_cast<long>(i - 1), 100);
      bool row_embeds = rows[i].find(",Embeds,") != std::string::npos;
      CHECK(row_embeds == set.contains(c));
      CHECK(rows[i].find("," + c.str() + ",") != std::string::npos);
      embeds += row_embeds;
    }
    CHECK(embeds == 201);
  }

  TEST_CASE("sweep row order and formats") {
    std::string path = temp_file("sweep2.json", R"({"fixed":{"n":3,"q":2,"a":0,"b":0,"c":0},
      "axes":[{"name":"p","start":1,"stop":2,"step":1},{"name":"r","start":"1","stop":"8","step":"1/2"}],
      "format":"json"})");
    auto r = run({"sweep", path});
    CHECK(r.code == 0);
    auto rows = lines(r.out);
    REQUIRE(rows.size() == 30);
    CHECK(Json::parse(rows[0])["p"] == "1");
    CHECK(Json::parse(rows[0])["r"] == "1");
    CHECK(Json::parse(rows[1])["r"] == "3/2");
    CHECK(Json::parse(rows[15])["p"] == "2");
    for (const auto& row : rows) {
      Json j = Json::parse(row);
      Params pr{3, rational_from_json(j["p"], "p"), 2, rational_from_json(j["r"], "r"), 0, 0, 0};
      CHECK(j["decision"] == to_string(classify(pr).decision));
    }
    CHECK(run({"sweep", path}).out == r.out);
  }

  TEST_CASE("sweep edge cases") {
    std::string path = temp_file("sweep_empty.json", R"({"fixed":{"n":3,"p":2,"q":2,"r":2,"a":0,"b":0},
      "axes":[{"name":"c","start":"1","stop":"0","step":"1"}]})");
    auto r = run({"sweep", path});
    CHECK(r.code == 0);
    CHECK(r.out.empty());

    path = temp_file("sweep_big.json", R"({"fixed":{"n":3,"p":2,"q":2,"r":2,"a":0,"b":0},
      "axes":[{"name":"c","start":"0","stop":"1","step":"1/100"}],"cap":10})");
    CHECK(run({"sweep", path}).code == 2);

    path = temp_file("sweep_dec.json", R"({"fixed":{"n":3,"p":2,"q":2,"r":2,"a":0,"b":0},
      "axes":[{"name":"c","start":"0.5","stop":"1","step":"1/100"}]})");
    r = run({"sweep", path});
    CHECK(r.code == 2);
    CHECK(r.err.find("c.start") != std::string::npos);

    CHECK(run({"sweep", "/nonexistent/spec.json"}).code == 2);
  }
}
