// Copyright 2026 The cvfield Authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy of
// the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations under
// the License.

#include "cvfield/cli.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iterator>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "cvfield/accumulate.h"
#include "cvfield/bitstream.h"
#include "cvfield/codec.h"
#include "cvfield/error.h"
#include "cvfield/export.h"
#include "cvfield/ingest.h"
#include "cvfield/protocol.h"
#include "cvfield/synth.h"

namespace cvfield {
namespace {

namespace fs = std::filesystem;
using Bytes = std::vector<std::uint8_t>;

Bytes ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  Bytes bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw DataError("error reading " + path.string());
  return bytes;
}

// Writes to a sibling temporary and renames it into place, so a failed run
// never leaves a partial file at `path`.
void WriteFileAtomic(const fs::path& path, const Bytes& bytes) {
  static std::atomic<unsigned> counter{0};
  fs::path tmp = path;
  tmp += ".tmp" + std::to_string(counter++);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot create " + tmp.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    out.close();
    if (!out) {
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw DataError("error writing " + path.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw DataError("cannot move output into " + path.string() + ": " + ec.message());
  }
}

bool HasExtension(const fs::path& path, const std::string& ext) {
  std::string e = path.extension().string();
  std::transform(e.begin(), e.end(), e.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return e == ext;
}

std::string Index6(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%06zu", i);
  return buf;
}

int DefaultParallelism() {
  if (const char* env = std::getenv("CVFIELD_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return 1;
}

// Runs task(i) for i in [0, n) on up to `workers` threads pulling from a
// shared counter. Rethrows the first failure.
template <typename Task>
void ForEachParallel(std::size_t n, int workers, Task task) {
  workers = std::max(1, std::min<int>(workers, static_cast<int>(n)));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          task(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mu);
          if (!failure) failure = std::current_exception();
          next = n;
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

Container LoadContainer(const fs::path& path) {
  const Bytes bytes = ReadFile(path);
  return ParseContainer(bytes);
}

std::vector<Frame> LoadFrames(const fs::path& path, int width, int height,
                              int channels) {
  const Bytes bytes = ReadFile(path);
  if (HasExtension(path, ".y4m")) return ReadY4m(bytes);
  if (width < 1 || height < 1) {
    throw InvalidArgument("raw input needs --width and --height");
  }
  return ReadRawFrames(bytes, width, height, channels);
}

void SaveFrames(const fs::path& path, const std::vector<Frame>& frames) {
  WriteFileAtomic(path, HasExtension(path, ".y4m") ? WriteY4m(frames)
                                                   : WriteRawFrames(frames));
}

// Global frame index of the first frame of every GOP.
std::vector<std::size_t> GopStarts(const Container& c) {
  std::vector<std::size_t> starts;
  std::size_t at = 0;
  for (const EncodedGop& gop : c.gops) {
    starts.push_back(at);
    at += gop.frame_count();
  }
  return starts;
}

// Calls emit(global_index, state) for every selected frame, GOP by GOP on
// `workers` threads.
template <typename Emit>
void ForSelectedStates(const Container& c, const std::vector<std::size_t>& selected,
                       int workers, Emit emit) {
  const std::vector<std::size_t> starts = GopStarts(c);
  ForEachParallel(c.gops.size(), workers, [&](std::size_t g) {
    const std::size_t first = starts[g];
    const std::size_t last = first + c.gops[g].frame_count();
    auto lo = std::lower_bound(selected.begin(), selected.end(), first);
    if (lo == selected.end() || *lo >= last) return;
    const std::vector<AccumulatorState> states = AccumulateGop(c.gops[g]);
    for (auto it = lo; it != selected.end() && *it < last; ++it) {
      emit(*it, states[*it - first]);
    }
  });
}

std::string FormatDouble(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

std::string JsonArray(const ScoreVector& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) s += ",";
    s += FormatDouble(v[i]);
  }
  return s + "]";
}

template <typename F>
double TimeMs(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : (v[m - 1] + v[m]) / 2;
}

}  // namespace

std::vector<std::size_t> ParseFrameSelector(const std::string& selector,
                                            std::size_t frame_count) {
  std::vector<std::size_t> out;
  if (selector == "all") {
    for (std::size_t i = 0; i < frame_count; ++i) out.push_back(i);
    return out;
  }
  auto parse_index = [&](const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos ||
        s.size() > 18) {
      throw InvalidArgument("bad frame selector '" + selector + "'");
    }
    return static_cast<std::size_t>(std::stoull(s));
  };
  std::stringstream parts(selector);
  std::string part;
  bool any = false;
  while (std::getline(parts, part, ',')) {
    any = true;
    const std::size_t dash = part.find('-');
    std::size_t lo = 0;
    std::size_t hi = 0;
    if (dash == std::string::npos) {
      lo = hi = parse_index(part);
    } else {
      lo = parse_index(part.substr(0, dash));
      hi = parse_index(part.substr(dash + 1));
      if (hi < lo) throw InvalidArgument("bad frame range '" + part + "'");
    }
    for (std::size_t i = lo; i <= hi && i < frame_count; ++i) out.push_back(i);
  }
  if (!any) throw InvalidArgument("empty frame selector");
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<BenchRecord> BenchExtract(std::span<const EncodedGop> gops, int reps) {
  if (reps < 1) throw InvalidArgument("reps must be ≥ 1");
  std::size_t frames = 0;
  for (const EncodedGop& gop : gops) frames += gop.frame_count();
  if (frames == 0) throw InvalidArgument("nothing to benchmark");

  // Folded into a checksum so the work cannot be discarded.
  std::uint64_t sink = 0;
  auto decode = [&] {
    for (const EncodedGop& gop : gops) sink += DecodeGop(gop).back().data[0];
  };
  auto accumulate = [&] {
    for (const EncodedGop& gop : gops) {
      sink += DecodeGop(gop).back().data[0];
      sink += static_cast<std::uint64_t>(AccumulateGop(gop).back().displacement[0]);
    }
  };
  auto backtrace = [&] {
    for (const EncodedGop& gop : gops) {
      sink += DecodeGop(gop).back().data[0];
      for (std::size_t t = 0; t < gop.frame_count(); ++t) {
        sink += static_cast<std::uint64_t>(
            BacktraceCompose(gop, static_cast<int>(t)).state.displacement[0]);
      }
    }
  };

  std::vector<BenchRecord> out;
  const std::pair<const char*, std::function<void()>> modes[] = {
      {"decode", decode}, {"decode+accumulate", accumulate},
      {"decode+backtrace", backtrace}};
  for (const auto& [name, run] : modes) {
    std::vector<double> ms;
    for (int r = 0; r < reps; ++r) ms.push_back(TimeMs(run));
    BenchRecord rec;
    rec.mode = name;
    rec.ms_per_frame = Median(ms) / static_cast<double>(frames);
    rec.frames_per_s = rec.ms_per_frame > 0 ? 1000.0 / rec.ms_per_frame : 0.0;
    out.push_back(rec);
  }
  volatile std::uint64_t keep = sink;
  (void)keep;
  return out;
}

std::vector<BenchRecord> BenchExtract(const std::filesystem::path& container,
                                      int reps) {
  if (reps < 1) throw InvalidArgument("reps must be ≥ 1");
  const Container c = LoadContainer(container);
  return BenchExtract(c.gops, reps);
}

std::string ToJsonLine(const BenchRecord& record) {
  return "{\"mode\":\"" + record.mode + "\",\"ms_per_frame\":" +
         FormatDouble(record.ms_per_frame) +
         ",\"frames_per_s\":" + FormatDouble(record.frames_per_s) + "}";
}

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Compressed-domain motion and residual toolkit", "cvfield"};
  app.require_subcommand(1);

  // encode
  std::string in_path;
  std::string out_path;
  GopConfig config;
  int raw_width = 0;
  int raw_height = 0;
  int raw_channels = 3;
  auto* encode = app.add_subcommand("encode", "Encode a Y4M or raw video into CVB1");
  encode->add_option("input", in_path, "Input .y4m or raw RGB/gray file")->required();
  encode->add_option("output", out_path, "Output .cvb file")->required();
  encode->add_option("--block-size", config.block_size, "Block side in pixels");
  encode->add_option("--search-range", config.search_range,
                     "Motion search range in pixels");
  encode->add_option("--gop", config.gop_length, "Frames per GOP (1 I + N-1 P)");
  encode->add_option("--width", raw_width, "Raw input width");
  encode->add_option("--height", raw_height, "Raw input height");
  encode->add_option("--channels", raw_channels, "Raw input channels (1 or 3)");

  // decode
  auto* decode = app.add_subcommand("decode", "Decode CVB1 to Y4M or raw frames");
  decode->add_option("input", in_path, "Input .cvb file")->required();
  decode->add_option("output", out_path, "Output .y4m or raw file")->required();

  // extract / viz
  std::string out_dir;
  std::string frames_sel = "all";
  std::string what = "both";
  int parallel = DefaultParallelism();
  std::optional<double> max_mag;
  auto* extract = app.add_subcommand(
      "extract", "Write accumulated motion/residual NPY files per frame");
  extract->add_option("input", in_path, "Input .cvb file")->required();
  extract->add_option("--out-dir", out_dir, "Output directory")->required();
  extract->add_option("--frames", frames_sel, "all, N, A-B or a comma list");
  extract->add_option("--what", what, "mv, res or both")
      ->check(CLI::IsMember({"mv", "res", "both"}));
  extract->add_option("--parallel", parallel, "GOP worker threads")
      ->check(CLI::PositiveNumber);

  auto* viz = app.add_subcommand("viz", "Render accumulated fields as PPM images");
  viz->add_option("input", in_path, "Input .cvb file")->required();
  viz->add_option("--out-dir", out_dir, "Output directory")->required();
  viz->add_option("--frames", frames_sel, "all, N, A-B or a comma list");
  viz->add_option("--max-mag", max_mag, "Magnitude mapped to full saturation");
  viz->add_option("--parallel", parallel, "GOP worker threads")
      ->check(CLI::PositiveNumber);

  // synth
  std::string spec_path;
  auto* synth = app.add_subcommand("synth", "Render a synthetic scene");
  synth->add_option("--spec", spec_path, "JSON scene description")->required();
  synth->add_option("--out", out_path, "Output .y4m or raw file")->required();

  // sample
  std::size_t n_frames = 0;
  std::size_t k = 25;
  auto* sample = app.add_subcommand("sample", "Print uniformly sampled frame indices");
  sample->add_option("--frames", n_frames, "Number of frames")->required();
  sample->add_option("--k", k, "Number of samples");

  // fuse
  std::vector<std::string> score_files;
  auto* fuse = app.add_subcommand("fuse", "Late-fuse per-stream score CSVs");
  fuse->add_option("--scores", score_files, "One CSV per stream")->required();

  // bench
  int reps = 5;
  auto* bench = app.add_subcommand("bench", "Time decode and accumulation");
  bench->add_option("input", in_path, "Input .cvb file")->required();
  bench->add_option("--reps", reps, "Repetitions per mode");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*encode) {
      ValidateConfig(config);
      const std::vector<Frame> frames =
          LoadFrames(in_path, raw_width, raw_height, raw_channels);
      if (frames.empty()) throw DataError("input holds no frames");
      const std::vector<EncodedGop> gops = EncodeVideo(frames, config);
      WriteFileAtomic(out_path, WriteContainer(gops, MakeHeader(gops)));
    } else if (*decode) {
      const Container c = LoadContainer(in_path);
      SaveFrames(out_path, DecodeVideo(c.gops));
    } else if (*extract || *viz) {
      const Container c = LoadContainer(in_path);
      const std::vector<std::size_t> selected =
          ParseFrameSelector(frames_sel, c.header.frame_count);
      fs::create_directories(out_dir);
      const fs::path dir(out_dir);
      if (*extract) {
        const bool mv = what != "res";
        const bool res = what != "mv";
        ForSelectedStates(c, selected, parallel,
                          [&](std::size_t i, const AccumulatorState& s) {
          const auto h = static_cast<std::size_t>(s.height);
          const auto w = static_cast<std::size_t>(s.width);
          if (mv) {
            WriteFileAtomic(dir / ("mv_" + Index6(i) + ".npy"),
                            WriteNpy(MakeTensor({h, w, 2}, s.displacement)));
          }
          if (res) {
            WriteFileAtomic(
                dir / ("res_" + Index6(i) + ".npy"),
                WriteNpy(MakeTensor({h, w, static_cast<std::size_t>(s.channels)},
                                    s.residual)));
          }
        });
      } else {
        ForSelectedStates(c, selected, parallel,
                          [&](std::size_t i, const AccumulatorState& s) {
          WriteFileAtomic(dir / ("mv_" + Index6(i) + ".ppm"),
                          WritePpm(MotionToImage(s.displacement_field(), max_mag)));
          WriteFileAtomic(dir / ("res_" + Index6(i) + ".ppm"),
                          WritePpm(ResidualToImage(s.residual_plane())));
        });
      }
    } else if (*synth) {
      const Bytes spec_bytes = ReadFile(spec_path);
      const SceneSpec spec = SceneSpecFromJson(
          std::string_view(reinterpret_cast<const char*>(spec_bytes.data()),
                           spec_bytes.size()));
      SaveFrames(out_path, SynthScene(spec).frames);
    } else if (*sample) {
      const std::vector<std::size_t> idx = UniformSampleIndices(n_frames, k);
      for (std::size_t i = 0; i < idx.size(); ++i) {
        out << (i ? " " : "") << idx[i];
      }
      out << "\n";
    } else if (*fuse) {
      std::vector<std::vector<ScoreVector>> streams;
      for (const std::string& f : score_files) {
        const Bytes b = ReadFile(f);
        streams.push_back(ParseScoreCsv(
            std::string_view(reinterpret_cast<const char*>(b.data()), b.size())));
        if (streams.back().empty()) throw DataError(f + " holds no scores");
      }
      const FusionResult r = FuseAndPredict(streams);
      out << "{\"fused\":" << JsonArray(r.fused)
          << ",\"probabilities\":" << JsonArray(r.probabilities)
          << ",\"predicted\":" << r.predicted << "}\n";
    } else if (*bench) {
      if (reps < 1) throw InvalidArgument("reps must be ≥ 1");
      for (const BenchRecord& rec : BenchExtract(fs::path(in_path), reps)) {
        out << ToJsonLine(rec) << "\n";
      }
    }
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}

}  // namespace cvfield
