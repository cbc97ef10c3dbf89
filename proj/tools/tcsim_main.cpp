/*
 * Copyright 2026 the tcsim authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// tcsim: assemble, run, and benchmark programs for the tightly coupled
// processor/accelerator simulator.
//
// Exit codes are a stable scripting contract:
//   0 success, 1 usage or parse error, 2 simulation fault,
//   3 cycle budget exceeded, 4 cross-mode digest mismatch.

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tcsim/accel.hpp"
#include "tcsim/assembler.hpp"
#include "tcsim/bench.hpp"
#include "tcsim/golden.hpp"
#include "tcsim/machine.hpp"
#include "tcsim/pipeline.hpp"

namespace {

using tcsim::Machine;
namespace assembler = tcsim::assembler;
namespace accel = tcsim::accel;
namespace bench = tcsim::bench;
namespace golden = tcsim::golden;
namespace pipeline = tcsim::pipeline;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitSimFault = 2;
constexpr int kExitRunaway = 3;
constexpr int kExitDigestMismatch = 4;

bool is_pow2(uint64_t v) { return v != 0 && (v & (v - 1)) == 0; }

// Defaults, overridable by the config file named in TCSIM_CONFIG and then
// by command-line flags (flags win).
struct Config {
  uint32_t imem_size_bytes = 64 * 1024;
  uint32_t dmem_size_bytes = 64 * 1024;
  double freq_mhz = bench::kDefaultFreqMhz;
  uint64_t max_cycles = 0;  // 0 = pick a default per command
  bool trace = false;
  std::string report_path;
  std::string csv_path;
  std::map<std::string, accel::CycleModel> cycle_models;
};

void apply_config_json(const nlohmann::json& j, Config& cfg) {
  if (j.contains("imem_size_bytes"))
    cfg.imem_size_bytes = j.at("imem_size_bytes").get<uint32_t>();
  if (j.contains("dmem_size_bytes"))
    cfg.dmem_size_bytes = j.at("dmem_size_bytes").get<uint32_t>();
  if (j.contains("freq_mhz")) cfg.freq_mhz = j.at("freq_mhz").get<double>();
  if (j.contains("max_cycles"))
    cfg.max_cycles = j.at("max_cycles").get<uint64_t>();
  if (j.contains("trace")) cfg.trace = j.at("trace").get<bool>();
  if (j.contains("report")) cfg.report_path = j.at("report").get<std::string>();
  if (j.contains("csv")) cfg.csv_path = j.at("csv").get<std::string>();
  if (j.contains("cycle_models")) {
    for (const auto& [name, cm] : j.at("cycle_models").items()) {
      accel::CycleModel model = accel::default_cycle_model(name);
      if (cm.contains("startup_cycles"))
        model.startup_cycles = cm.at("startup_cycles").get<uint64_t>();
      if (cm.contains("elems_per_cycle"))
        model.elems_per_cycle = cm.at("elems_per_cycle").get<uint64_t>();
      cfg.cycle_models[name] = model;
    }
  }
}

void validate_config(const Config& cfg) {
  if (!is_pow2(cfg.imem_size_bytes) || cfg.imem_size_bytes < 4096)
    throw std::invalid_argument("imem_size_bytes must be a power of two >= 4096");
  if (!is_pow2(cfg.dmem_size_bytes) || cfg.dmem_size_bytes < 4096)
    throw std::invalid_argument("dmem_size_bytes must be a power of two >= 4096");
  if (!(cfg.freq_mhz > 0)) throw std::invalid_argument("freq_mhz must be > 0");
}

Config load_config() {
  Config cfg;
  const char* path = std::getenv("TCSIM_CONFIG");
  if (path == nullptr || *path == '\0') return cfg;
  std::ifstream in(path);
  if (!in) throw std::invalid_argument(std::string("cannot open config ") + path);
  nlohmann::json j;
  in >> j;
  apply_config_json(j, cfg);
  return cfg;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << content;
}

// AsmError carries no filename, so parse failures outside the asm
// subcommand must be re-labelled here to name the offending image.
assembler::MemoryImage parse_hex_file(const std::string& path) {
  try {
    return assembler::parse_hex_image(read_file(path));
  } catch (const assembler::AsmError& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

// ---- asm --------------------------------------------------------------

int cmd_asm(const std::string& input, const std::string& output, bool dis) {
  std::string text = read_file(input);
  if (dis) {
    assembler::MemoryImage img = assembler::parse_hex_image(text);
    std::vector<std::string> lines = assembler::disassemble(img);
    std::string listing;
    for (size_t i = 0; i < lines.size(); ++i) {
      char head[32];
      std::snprintf(head, sizeof head, "%08x:  %08x  ",
                    img.base_address + 4 * static_cast<uint32_t>(i),
                    img.words[i]);
      listing += head;
      listing += lines[i];
      listing += '\n';
    }
    if (output.empty()) {
      std::cout << listing;
    } else {
      write_file(output, listing);
    }
    return kExitOk;
  }
  assembler::MemoryImage img = assembler::assemble(text);
  write_file(output, assembler::to_hex_image(img));
  return kExitOk;
}

// ---- run --------------------------------------------------------------

struct RunOptions {
  std::string imem_path;
  std::string dmem_path;
  std::string mode = "pipeline";
  std::string accel_name;
  bool trace = false;
};

std::unique_ptr<tcsim::murac::Accelerator> pick_accelerator(
    const Config& cfg, const std::string& name) {
  if (name.empty()) return nullptr;
  auto it = cfg.cycle_models.find(name);
  if (it != cfg.cycle_models.end())
    return accel::make_accelerator(name, it->second);
  return accel::make_accelerator(name);
}

int cmd_run(const Config& cfg, const RunOptions& opt) {
  uint64_t max_cycles = cfg.max_cycles ? cfg.max_cycles : 100'000'000;

  assembler::MemoryImage imem_img = parse_hex_file(opt.imem_path);
  assembler::MemoryImage dmem_img;
  if (!opt.dmem_path.empty()) dmem_img = parse_hex_file(opt.dmem_path);

  if (imem_img.end_address() > cfg.imem_size_bytes)
    throw std::invalid_argument("imem image exceeds imem_size_bytes");
  if (dmem_img.end_address() > cfg.dmem_size_bytes)
    throw std::invalid_argument("dmem image exceeds dmem_size_bytes");

  Machine m(cfg.imem_size_bytes, cfg.dmem_size_bytes);
  assembler::load_image(imem_img, m.imem);
  assembler::load_image(dmem_img, m.dmem);
  auto acc = pick_accelerator(cfg, opt.accel_name);

  nlohmann::ordered_json report;
  report["mode"] = opt.mode;
  int exit_code = kExitOk;

  if (opt.mode == "golden") {
    golden::RunResult res =
        golden::run_to_halt(m.state, m.imem, m.dmem, acc.get(), max_cycles);
    report["halted"] = res.halted;
    report["runaway"] = res.runaway;
    report["retired"] = res.retired;
    if (res.fault) {
      report["fault"] = {{"kind", tcsim::fault_name(res.fault->kind)},
                         {"pc", res.fault->pc},
                         {"detail", res.fault->detail}};
      std::cerr << "fault: " << tcsim::fault_name(res.fault->kind) << " at pc=0x"
                << std::hex << res.fault->pc << std::dec << " ("
                << res.fault->detail << ")\n";
      exit_code = kExitSimFault;
    } else if (res.runaway) {
      std::cerr << "runaway: exceeded " << max_cycles << " steps\n";
      exit_code = kExitRunaway;
    } else {
      std::printf("halted: retired=%" PRIu64 " pc=0x%08x\n", res.retired,
                  m.state.pc);
    }
  } else if (opt.mode == "pipeline") {
    pipeline::Pipeline pipe(m, acc.get());
    if (opt.trace) {
      pipe.set_trace([](const pipeline::TraceEvent& e) {
        std::cout << pipeline::format_trace_line(e) << '\n';
      });
    }
    pipeline::RunReport res = pipe.run(max_cycles, cfg.freq_mhz);
    report["halted"] = res.halted;
    report["runaway"] = res.runaway;
    report["total_cycles"] = res.total_cycles;
    report["retired"] = res.retired;
    report["stall_cycles"] = res.stall_cycles;
    report["aux_cycles"] = res.aux_cycles;
    report["flushes"] = res.flushes;
    report["baa_count"] = res.baa_count;
    report["freq_mhz"] = res.freq_mhz;
    report["latency_s"] = res.latency_s;
    if (res.fault) {
      report["fault"] = {{"kind", tcsim::fault_name(res.fault->kind)},
                         {"pc", res.fault->pc},
                         {"detail", res.fault->detail}};
      std::cerr << "fault: " << tcsim::fault_name(res.fault->kind) << " at pc=0x"
                << std::hex << res.fault->pc << std::dec << " ("
                << res.fault->detail << ")\n";
      exit_code = kExitSimFault;
    } else if (res.runaway) {
      std::cerr << "runaway: exceeded " << max_cycles << " cycles\n";
      exit_code = kExitRunaway;
    } else {
      std::printf("halted: total_cycles=%" PRIu64 " retired=%" PRIu64
                  " stalls=%" PRIu64 " flushes=%" PRIu64 " latency_s=%.6f\n",
                  res.total_cycles, res.retired, res.stall_cycles, res.flushes,
                  res.latency_s);
    }
  } else {
    throw std::invalid_argument("mode must be golden or pipeline");
  }

  if (!cfg.report_path.empty())
    write_file(cfg.report_path, report.dump(2) + "\n");
  return exit_code;
}

// ---- bench ------------------------------------------------------------

struct BenchOptions {
  std::string app;
  std::string mode = "all";
  std::string scale = "desk";
  uint64_t seed = 1;
};

void print_bench_row(const bench::BenchmarkSpec& spec,
                     const bench::BenchResult& r) {
  std::printf("%-4s %-4s %12" PRIu64 " %12" PRIu64 " %10" PRIu64 " %10" PRIu64
              " %8" PRIu64 " %6" PRIu64 " %10.6f  0x%016" PRIx64 "\n",
              std::string(bench::app_name(spec.app)).c_str(),
              std::string(bench::mode_name(spec.mode)).c_str(),
              r.report.total_cycles, r.report.retired, r.report.stall_cycles,
              r.report.aux_cycles, r.report.flushes, r.report.baa_count,
              r.report.latency_s, r.output_digest);
}

int cmd_bench(const Config& cfg, const BenchOptions& opt) {
  auto app = bench::parse_app(opt.app);
  if (!app) throw std::invalid_argument("app must be one of mm, fir, km, se");
  if (opt.scale != "desk" && opt.scale != "paper")
    throw std::invalid_argument("scale must be desk or paper");

  bench::KernelParams params =
      opt.scale == "desk" ? bench::desk_params(*app) : bench::paper_params(*app);
  uint64_t max_cycles = cfg.max_cycles
                            ? cfg.max_cycles
                            : (opt.scale == "desk" ? 100'000'000ull
                                                   : 5'000'000'000ull);

  std::vector<bench::Mode> modes;
  if (opt.mode == "all") {
    modes.assign(bench::kAllModes.begin(), bench::kAllModes.end());
  } else {
    auto m = bench::parse_mode(opt.mode);
    if (!m) throw std::invalid_argument("mode must be sw, tc, hw, or all");
    modes.push_back(*m);
  }

  std::printf("%-4s %-4s %12s %12s %10s %10s %8s %6s %10s  %s\n", "app",
              "mode", "cycles", "retired", "stalls", "aux", "flushes", "baa",
              "latency_s", "digest");

  std::vector<bench::BenchmarkSpec> specs;
  std::vector<bench::BenchResult> results;
  for (bench::Mode mode : modes) {
    bench::BenchmarkSpec spec;
    spec.app = *app;
    spec.mode = mode;
    spec.params = params;
    spec.seed = opt.seed;
    spec.freq_mhz = cfg.freq_mhz;
    // Cycle-model override keyed by the accelerator the mode selects.
    if (mode != bench::Mode::Sw) {
      std::string name = std::string(bench::app_name(*app)) +
                         (mode == bench::Mode::Tc ? "-tile" : "-full");
      auto it = cfg.cycle_models.find(name);
      if (it != cfg.cycle_models.end()) spec.cycle_model = it->second;
    }
    bench::BenchResult r = bench::run_benchmark(spec, max_cycles);
    print_bench_row(spec, r);
    specs.push_back(spec);
    results.push_back(std::move(r));
  }

  int exit_code = kExitOk;
  if (results.size() > 1) {
    bool match = true;
    for (const auto& r : results)
      match = match && r.output_digest == results[0].output_digest;
    if (match) {
      double sw = static_cast<double>(results[0].report.total_cycles);
      std::printf("digests match; speedup over sw: tc %.2fx, hw %.2fx\n",
                  sw / static_cast<double>(results[1].report.total_cycles),
                  sw / static_cast<double>(results[2].report.total_cycles));
    } else {
      std::cerr << "digest mismatch across modes\n";
      exit_code = kExitDigestMismatch;
    }
  }

  if (!cfg.csv_path.empty()) {
    std::string csv = bench::csv_header() + "\n";
    for (size_t i = 0; i < results.size(); ++i)
      csv += bench::csv_row(specs[i], results[i]) + "\n";
    write_file(cfg.csv_path, csv);
  }
  if (!cfg.report_path.empty()) {
    std::string out;
    if (results.size() == 1) {
      out = bench::result_json(specs[0], results[0]) + "\n";
    } else {
      out = "[\n";
      for (size_t i = 0; i < results.size(); ++i) {
        std::istringstream iss(bench::result_json(specs[i], results[i]));
        std::string line;
        while (std::getline(iss, line)) out += "  " + line + "\n";
        if (i + 1 < results.size()) out.insert(out.size() - 1, ",");
      }
      out += "]\n";
    }
    write_file(cfg.report_path, out);
  }
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"tcsim: tightly coupled processor/accelerator simulator"};
  cli.require_subcommand(1);

  Config cfg;
  try {
    cfg = load_config();
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  }

  // asm
  std::string asm_input, asm_output;
  bool asm_dis = false;
  CLI::App* sub_asm = cli.add_subcommand("asm", "assemble or disassemble");
  sub_asm->add_option("input", asm_input, "source (.s) or hex image with --dis")
      ->required();
  sub_asm->add_option("-o,--output", asm_output, "output path");
  sub_asm->add_flag("--dis", asm_dis, "disassemble a hex image");

  // run
  RunOptions run_opt;
  CLI::App* sub_run = cli.add_subcommand("run", "run one program");
  sub_run->add_option("--imem", run_opt.imem_path, "instruction hex image")
      ->required();
  sub_run->add_option("--dmem", run_opt.dmem_path, "data hex image");
  sub_run->add_option("--mode", run_opt.mode, "golden or pipeline");
  sub_run->add_option("--accel", run_opt.accel_name,
                      "accelerator to register (e.g. mm-tile)");
  sub_run->add_flag("--trace", run_opt.trace, "print a per-cycle trace");
  sub_run->add_option("--report", cfg.report_path, "write a JSON report");
  sub_run->add_option("--max-cycles", cfg.max_cycles, "cycle budget");
  sub_run->add_option("--freq-mhz", cfg.freq_mhz, "clock for latency_s");
  sub_run->add_option("--imem-size", cfg.imem_size_bytes, "imem bytes (pow2)");
  sub_run->add_option("--dmem-size", cfg.dmem_size_bytes, "dmem bytes (pow2)");

  // bench
  BenchOptions bench_opt;
  CLI::App* sub_bench = cli.add_subcommand("bench", "generate, run, compare");
  sub_bench->add_option("--app", bench_opt.app, "mm, fir, km, or se")
      ->required();
  sub_bench->add_option("--mode", bench_opt.mode, "sw, tc, hw, or all");
  sub_bench->add_option("--scale", bench_opt.scale, "desk or paper");
  sub_bench->add_option("--seed", bench_opt.seed, "input data seed");
  sub_bench->add_option("--csv", cfg.csv_path, "write CSV rows");
  sub_bench->add_option("--report", cfg.report_path, "write a JSON report");
  sub_bench->add_option("--max-cycles", cfg.max_cycles, "cycle budget");
  sub_bench->add_option("--freq-mhz", cfg.freq_mhz, "clock for latency_s");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return cli.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    validate_config(cfg);
    if (sub_asm->parsed()) {
      if (!asm_dis && asm_output.empty())
        throw std::invalid_argument("asm requires -o unless --dis is given");
      return cmd_asm(asm_input, asm_output, asm_dis);
    }
    if (sub_run->parsed()) {
      run_opt.trace = run_opt.trace || cfg.trace;
      return cmd_run(cfg, run_opt);
    }
    if (sub_bench->parsed()) return cmd_bench(cfg, bench_opt);
  } catch (const assembler::AsmError& e) {
    std::cerr << asm_input << ": " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::runtime_error& e) {
    // Simulation-level failures from the bench harness.
    std::string msg = e.what();
    std::cerr << msg << '\n';
    return msg.find("cycle budget") != std::string::npos ? kExitRunaway
                                                         : kExitSimFault;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitOk;
}
