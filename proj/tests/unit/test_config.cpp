#include <doctest.h>

#include <set>
#include <string>

#include "aggdiff/config.h"
#include "aggdiff/error.h"

using namespace aggdiff;

namespace {
ErrorCode code_of(const std::string& text) {
  try {
    parse_config_text(text, "test.cfg");
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::BadParameter;
}

std::string message_of(const std::string& text) {
  try {
    parse_config_text(text, "test.cfg");
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}
}  // namespace

TEST_CASE("empty config equals the documented defaults") {
  const RunConfig c = parse_config_text("");
  const RunConfig plain;
  CHECK(c.L == plain.L);
  CHECK(c.N == plain.N);
  CHECK(c.T == plain.T);
  CHECK(c.dt_init == plain.dt_init);
  CHECK(c.record_count == plain.record_count);
  CHECK(c.kernel_kind == plain.kernel_kind);
  CHECK(c.diffusion_family == plain.diffusion_family);
  CHECK(c.study_N == plain.study_N);
  CHECK(c.study_L == plain.study_L);
  CHECK(c.output_formats == plain.output_formats);
  CHECK(c.init.params.empty());
}

TEST_CASE("every documented key is accepted") {
  std::set<std::string> keys;
  for (const auto& k : config_defaults()) keys.insert(k.key);
  CHECK(keys.count("diffusion.m") == 1);
  CHECK(keys.count("kernel.kind") == 1);
  CHECK(keys.count("init.path") == 1);
  CHECK(config_reference().find("`study.oracle_M`") != std::string::npos);
}

TEST_CASE("minimal heat config") {
  const RunConfig c = parse_config_text(
      "# heat\n"
      "particles.N = 400   # more particles\n"
      "time.T = 0.01\n"
      "init.kind = sine\n"
      "init.amplitude = 0.25\n"
      "study.N_list = 100, 200\n");
  CHECK(c.N == 400);
  CHECK(c.T == 0.01);
  CHECK(c.init.kind == InitKind::sine);
  CHECK(c.init.params.at("amplitude") == 0.25);
  CHECK(c.study_N == std::vector<std::size_t>{100, 200});
  const auto p = make_physics(c);
  CHECK(p.kernel.kind == KernelKind::zero);
  CHECK(p.diffusion.phi_v(2.0) == doctest::Approx(2.0));
  const auto s = make_scheme(c);
  CHECK(s.record_times.size() == 11);
  CHECK(s.t_end == 0.01);
}

TEST_CASE("diffusion.m <= 1 is a bad value naming the line") {
  CHECK(code_of("diffusion.family = power\ndiffusion.m = 0.5\n") == ErrorCode::BadValue);
  CHECK(message_of("diffusion.family = power\ndiffusion.m = 0.5\n").find("test.cfg:2") != std::string::npos);
}

TEST_CASE("unknown kernel kind lists the valid kinds") {
  CHECK(code_of("kernel.kind = yukawa\n") == ErrorCode::UnknownKey);
  const auto msg = message_of("\nkernel.kind = yukawa\n");
  CHECK(msg.find("test.cfg:2") != std::string::npos);
  CHECK(msg.find("two_yukawa") != std::string::npos);
  CHECK(msg.find("gaussian_bump") != std::string::npos);
}

TEST_CASE("typos and malformed lines are errors") {
  CHECK(code_of("particles.n = 10\n") == ErrorCode::UnknownKey);
  CHECK(code_of("particles.N 10\n") == ErrorCode::ParseError);
  CHECK(code_of("particles.N = 10\nparticles.N = 20\n") == ErrorCode::ParseError);
  CHECK(code_of("particles.N = ten\n") == ErrorCode::BadValue);
  CHECK(code_of("particles.N = 2.5\n") == ErrorCode::BadValue);
  CHECK(code_of("domain.L = -1\n") == ErrorCode::BadValue);
  CHECK(code_of("time.dt_init = 0.1\ntime.dt_max = 0.01\n") == ErrorCode::BadValue);
  CHECK(code_of("kernel.kind = two_yukawa\nkernel.beta = 0.5\n") == ErrorCode::BadValue);
  CHECK(code_of("init.kind = file\n") == ErrorCode::BadValue);
  CHECK(code_of("study.N_list = 100, 50\n") == ErrorCode::BadValue);
  CHECK(code_of("output.formats = csv, xml\n") == ErrorCode::UnknownKey);
}

TEST_CASE("missing config file") {
  try {
    parse_config("/nonexistent/dir/none.cfg");
    FAIL("expected IoError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IoError);
  }
}

TEST_CASE("study config from a run config") {
  const RunConfig c = parse_config_text("study.oracle = finite_volume\nstudy.oracle_M = 512\noutput.dir = x\n");
  const StudyConfig s = make_study(c, 3);
  CHECK(s.oracle == OracleKind::finite_volume);
  CHECK(s.oracle_cells == 512);
  CHECK(s.threads == 3);
  CHECK(s.out_dir == "x");
}
