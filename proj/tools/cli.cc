// Copyright 2026 The INML Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli.h"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>
#include <utility>

#include "inml/control_plane.h"
#include "inml/error.h"
#include "inml/eval.h"
#include "inml/model.h"
#include "inml/pipeline.h"
#include "inml/table_entries.h"
#include "inml/wire.h"

namespace inml::cli {

namespace {

namespace fs = std::filesystem;

// A failure attributable to input data or the filesystem; exits with 2.
class DataFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string describe(const std::string &path, const Error &e) {
  std::string out = path;
  if (e.line() > 0) out += ":" + std::to_string(e.line());
  out += ": ";
  out += error_code_name(e.code());
  out += ": ";
  out += e.message();
  return out;
}

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataFailure(path + ": cannot open for reading");
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

// Runs `load` and attributes any library error to `path`.
template <typename F>
auto from_file(const std::string &path, F &&load) {
  try {
    return load(read_file(path));
  } catch (const Error &e) {
    throw DataFailure(describe(path, e));
  }
}

ModelSpec load_model(const std::string &path) {
  return from_file(path, [](const std::string &text) { return parse_model(text); });
}

Dataset load_dataset(const std::string &path) {
  return from_file(path, [](const std::string &text) { return parse_dataset(text); });
}

TableEntrySet load_tables(const std::string &path) {
  return from_file(path, [](const std::string &text) { return parse_table_entries(text); });
}

std::vector<PacketFrame> load_frames(const std::string &path) {
  return from_file(path, [](const std::string &bytes) {
    std::istringstream in(bytes);
    return read_frames(in);
  });
}

std::string frames_to_bytes(const std::vector<PacketFrame> &frames) {
  std::ostringstream out;
  write_frames(out, frames);
  return out.str();
}

// Collects every output of a command and writes them only once the command
// has succeeded: each file goes to "<path>.tmp" and is then renamed.
class OutputSet {
 public:
  void add(std::string path, std::string content) {
    files_.emplace_back(std::move(path), std::move(content));
  }

  void commit() {
    std::vector<std::string> staged;
    try {
      for (const auto &[path, content] : files_) {
        const std::string tmp = path + ".tmp";
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataFailure(path + ": cannot open for writing");
        staged.push_back(tmp);
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.close();
        if (!out) throw DataFailure(path + ": write failed");
      }
      for (const auto &[path, content] : files_) fs::rename(path + ".tmp", path);
    } catch (...) {
      std::error_code ignored;
      for (const auto &tmp : staged) fs::remove(tmp, ignored);
      throw;
    }
  }

 private:
  std::vector<std::pair<std::string, std::string>> files_;
};

// Output paths must land in an existing directory.
const CLI::Validator kOutputPath(
    [](std::string &path) -> std::string {
      const fs::path parent = fs::path(path).parent_path();
      if (!parent.empty() && !fs::is_directory(parent)) {
        return "directory does not exist: " + parent.string();
      }
      if (fs::is_directory(path)) return "output path is a directory: " + path;
      return {};
    },
    "OUTPUT");

struct GlobalOptions {
  std::uint64_t seed = kDefaultSeed;
  std::optional<int> scale;
  bool verbose = false;
};

std::string join_ints(const std::vector<int> &v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

}  // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"In-network ML toolkit: compile models to fixed-point table entries and "
               "run inference over encapsulated packets"};
  app.name(args.empty() ? "inml" : fs::path(args[0]).filename().string());
  app.require_subcommand(1);
  app.fallthrough();
  app.failure_message(CLI::FailureMessage::help);

  GlobalOptions global;
  app.add_option("--seed", global.seed, "Seed for every random draw")->capture_default_str();
  app.add_option("--scale", global.scale, "Fractional bits s")->check(CLI::Range(0, 30));
  app.add_flag("-v,--verbose", global.verbose, "Progress messages on stderr");

  // fit
  auto *fit = app.add_subcommand("fit", "Least-squares linear model from a CSV dataset");
  std::string fit_data, fit_out;
  double fit_ridge = 0.0;
  int fit_model_id = 1;
  fit->add_option("--data", fit_data, "Dataset CSV (x0..xk,y0..ym)")->required()->check(CLI::ExistingFile);
  fit->add_option("--out", fit_out, "Model file to write")->required()->check(kOutputPath);
  fit->add_option("--ridge", fit_ridge, "L2 penalty on the weights")->check(CLI::NonNegativeNumber);
  fit->add_option("--model-id", fit_model_id, "Model id")->check(CLI::Range(0, 65535));

  // quantize
  auto *quantize = app.add_subcommand("quantize", "Compile a model file into table entries");
  std::string q_model, q_out;
  quantize->add_option("--model", q_model, "Model file")->required()->check(CLI::ExistingFile);
  quantize->add_option("--out", q_out, "Table-entry file to write")->required()->check(kOutputPath);

  // emit-tables
  auto *emit = app.add_subcommand("emit-tables", "Merge table-entry files into canonical form");
  std::vector<std::string> e_tables;
  std::string e_out;
  emit->add_option("--tables", e_tables, "Table-entry files; later files replace models")
      ->required()
      ->check(CLI::ExistingFile);
  emit->add_option("--out", e_out, "Output file (stdout when omitted)")->check(kOutputPath);

  // gen-traffic
  auto *gen = app.add_subcommand("gen-traffic", "Synthetic request packets for a model");
  std::string g_model, g_out;
  std::size_t g_count = 100;
  double g_lo = -1.0, g_hi = 1.0;
  std::size_t g_payload = 0;
  gen->add_option("--model", g_model, "Model file")->required()->check(CLI::ExistingFile);
  gen->add_option("--count", g_count, "Number of packets")->check(CLI::Range(1, 100000000));
  gen->add_option("--lo", g_lo, "Lower feature bound");
  gen->add_option("--hi", g_hi, "Upper feature bound");
  gen->add_option("--payload", g_payload, "Opaque payload bytes per packet");
  gen->add_option("--out", g_out, "Frame file to write")->required()->check(kOutputPath);

  // run
  auto *run = app.add_subcommand("run", "Process a frame file through the pipeline");
  std::vector<std::string> r_tables;
  std::string r_in, r_out, r_stats;
  bool r_trace = false;
  run->add_option("--tables", r_tables, "Table-entry files")->required()->check(CLI::ExistingFile);
  run->add_option("--in", r_in, "Input frame file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", r_out, "Result frame file")->required()->check(kOutputPath);
  run->add_option("--stats", r_stats, "Stats file (.csv for CSV, key=value otherwise)")
      ->check(kOutputPath);
  run->add_flag("--trace", r_trace, "Collect per-op counts");

  // trace
  auto *trace = app.add_subcommand("trace", "Dump the primitive-op trace of one packet");
  std::vector<std::string> t_tables;
  std::string t_in, t_out;
  std::size_t t_index = 0;
  trace->add_option("--tables", t_tables, "Table-entry files")->required()->check(CLI::ExistingFile);
  trace->add_option("--in", t_in, "Input frame file")->required()->check(CLI::ExistingFile);
  trace->add_option("--index", t_index, "Packet index in the frame file");
  trace->add_option("--out", t_out, "Trace file (stdout when omitted)")->check(kOutputPath);

  // eval
  auto *eval = app.add_subcommand("eval", "Error and overhead studies");
  eval->require_subcommand(1);

  auto *bits = eval->add_subcommand("mse-vs-bits", "Normalized MSE per fractional-bit count");
  std::string b_model, b_data, b_out;
  std::vector<int> b_bits{4, 8, 12, 16};
  bits->add_option("--model", b_model, "Model file (fit to the data when omitted)")
      ->check(CLI::ExistingFile);
  bits->add_option("--data", b_data, "Dataset CSV (synthetic benchmark when omitted)")
      ->check(CLI::ExistingFile);
  bits->add_option("--bits", b_bits, "Comma-separated fractional bits")
      ->delimiter(',')
      ->check(CLI::Range(1, 30));
  bits->add_option("--out", b_out, "CSV output")->required()->check(kOutputPath);

  auto *orders = eval->add_subcommand("mse-vs-order", "Normalized MSE per Taylor order");
  std::string o_model, o_data, o_out;
  std::vector<int> o_orders{1, 3, 5};
  orders->add_option("--model", o_model, "Model with sigmoid layers (reference when omitted)")
      ->check(CLI::ExistingFile);
  orders->add_option("--data", o_data, "Dataset CSV (synthetic when omitted)")
      ->check(CLI::ExistingFile);
  orders->add_option("--orders", o_orders, "Comma-separated orders from {1,3,5}")
      ->delimiter(',')
      ->check(CLI::IsMember({1, 3, 5}));
  orders->add_option("--out", o_out, "CSV output")->required()->check(kOutputPath);

  auto *tput = eval->add_subcommand("throughput", "Goodput versus encapsulation overhead");
  ThroughputParams tp;
  std::vector<std::uint64_t> t_overheads{0, 32, 64, 128, 256, 512, 1024, 2048, 4096};
  std::size_t t_measure = 0;
  std::string tp_out;
  tput->add_option("--line-rate", tp.line_rate_bps, "Line rate, bits/s")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  tput->add_option("--payload", tp.payload_bytes, "Payload bytes per packet")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  tput->add_option("--overheads", t_overheads, "Comma-separated overheads in bits")
      ->delimiter(',');
  tput->add_option("--measure", t_measure,
                   "Packets to time through the software pipeline (0 = skip)");
  tput->add_option("--out", tp_out, "CSV output")->required()->check(kOutputPath);

  std::vector<const char *> argv;
  argv.reserve(args.size());
  for (const auto &a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp &e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp &e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError &e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  auto note = [&](const std::string &msg) {
    if (global.verbose) err << msg << "\n";
  };

  try {
    OutputSet outputs;

    if (*fit) {
      const Dataset data = load_dataset(fit_data);
      FitOptions options;
      options.ridge = fit_ridge;
      options.model_id = static_cast<std::uint16_t>(fit_model_id);
      options.scale_bits = global.scale.value_or(16);
      ModelSpec model;
      try {
        model = fit_linear(data, options);
      } catch (const Error &e) {
        throw DataFailure(describe(fit_data, e));
      }
      note("fit " + std::to_string(data.size()) + " samples");
      outputs.add(fit_out, render_model(model));
    } else if (*quantize) {
      const ModelSpec model = load_model(q_model);
      const int s = global.scale.value_or(model.scale_bits);
      TableEntrySet entries;
      try {
        entries = quantize_model(model, FixedPointFormat(s));
      } catch (const Error &e) {
        throw DataFailure(describe(q_model, e));
      }
      note("quantized " + std::to_string(entries.size()) + " entries at s=" + std::to_string(s));
      outputs.add(q_out, emit_table_entries(entries));
    } else if (*emit) {
      TableEntrySet merged;
      for (const auto &path : e_tables) merged.merge(load_tables(path));
      const std::string text = emit_table_entries(merged);
      if (e_out.empty()) {
        out << text;
      } else {
        outputs.add(e_out, text);
      }
    } else if (*gen) {
      ModelSpec model = load_model(g_model);
      if (global.scale) model.scale_bits = *global.scale;
      std::vector<PacketFrame> frames;
      try {
        frames = gen_traffic(model, g_count, global.seed, g_lo, g_hi, g_payload);
      } catch (const Error &e) {
        throw DataFailure(describe(g_model, e));
      }
      note("generated " + std::to_string(frames.size()) + " packets");
      outputs.add(g_out, frames_to_bytes(frames));
    } else if (*run || *trace) {
      const auto &table_paths = *run ? r_tables : t_tables;
      ControlPlane control;
      for (const auto &path : table_paths) {
        const TableEntrySet entries = load_tables(path);
        try {
          control.load_tables(entries);
        } catch (const Error &e) {
          throw DataFailure(describe(path, e));
        }
      }
      if (*run) {
        const auto frames = load_frames(r_in);
        const StreamResult result = process_stream(frames, control, r_trace);
        outputs.add(r_out, frames_to_bytes(result.frames));
        const bool csv = r_stats.size() >= 4 && r_stats.substr(r_stats.size() - 4) == ".csv";
        if (!r_stats.empty()) {
          outputs.add(r_stats, csv ? result.stats.to_csv() : result.stats.to_key_value());
        } else {
          out << result.stats.to_key_value();
        }
        note("processed " + std::to_string(result.stats.packets_in) + " packets");
      } else {
        const auto frames = load_frames(t_in);
        if (t_index >= frames.size()) {
          throw DataFailure(t_in + ": packet index " + std::to_string(t_index) +
                            " out of range (" + std::to_string(frames.size()) + " packets)");
        }
        OpTrace ops;
        try {
          ops = op_trace(frames[t_index], control);
        } catch (const Error &e) {
          throw DataFailure(t_in + ": packet " + std::to_string(t_index) + ": " +
                            std::string(error_code_name(e.code())) + ": " + e.message());
        }
        std::ostringstream text;
        for (OpTag tag : ops) text << op_tag_name(tag) << "\n";
        text << "# total " << ops.size();
        const OpCounts counts = count_ops(ops);
        for (std::size_t t = 0; t < kNumOpTags; ++t) {
          if (counts[t] > 0) text << " " << op_tag_name(static_cast<OpTag>(t)) << "=" << counts[t];
        }
        text << "\n";
        if (t_out.empty()) {
          out << text.str();
        } else {
          outputs.add(t_out, text.str());
        }
      }
    } else if (*bits) {
      Dataset data;
      ModelSpec model;
      if (!b_data.empty()) {
        data = load_dataset(b_data);
      } else {
        data = synthetic_dataset(linear_reference_model(), kBenchmarkSamples, global.seed);
      }
      if (!b_model.empty()) {
        model = load_model(b_model);
      } else {
        FitOptions options;
        options.model_id = 1;
        try {
          model = fit_linear(data, options);
        } catch (const Error &e) {
          throw DataFailure(describe(b_data.empty() ? "<synthetic>" : b_data, e));
        }
      }
      note("mse-vs-bits over " + join_ints(b_bits));
      const auto rows = eval_mse_vs_fracbits(model, data, b_bits, global.seed);
      outputs.add(b_out, render_fracbits_csv(rows));
    } else if (*orders) {
      ModelSpec model = o_model.empty() ? sigmoid_reference_model() : load_model(o_model);
      const Dataset data = o_data.empty()
                               ? synthetic_dataset(model, kBenchmarkSamples, global.seed)
                               : load_dataset(o_data);
      const int s = global.scale.value_or(model.scale_bits);
      note("mse-vs-order over " + join_ints(o_orders) + " at s=" + std::to_string(s));
      const auto rows = eval_mse_vs_order(model, data, o_orders, s, global.seed);
      outputs.add(o_out, render_order_csv(rows));
    } else if (*tput) {
      const auto rows = eval_throughput_overhead(tp, t_overheads, t_measure);
      outputs.add(tp_out, render_throughput_csv(rows));
    }

    outputs.commit();
  } catch (const DataFailure &e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const Error &e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const fs::filesystem_error &e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}

}  // namespace inml::cli
