// Command-line driver: keygen, round, verify, nist, bench, report.
// Exit codes: 0 ok, 1 verification or submission failure, 2 input error.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pqvrf/complexity.hpp"
#include "pqvrf/config.hpp"
#include "pqvrf/journal.hpp"
#include "pqvrf/round.hpp"
#include "pqvrf/stats/entropy.hpp"
#include "pqvrf/stats/suite.hpp"

namespace fs = std::filesystem;
using namespace pqvrf;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kInputError = 2;

struct InputError : Error {
  using Error::Error;
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw InputError("cannot read " + p.string());
  return {std::istreambuf_iterator<char>(in), {}};
}

void write_file(const fs::path& p, std::string_view content) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw InputError("cannot write " + p.string());
  out << content;
  if (!out) throw InputError("write failed for " + p.string());
}

void validate(const RunConfig& cfg) {
  try {
    cfg.validate();
    (void)Group::named(cfg.group);
    (void)rlwe::RlweParams::named(cfg.rlwe);
  } catch (const Error& e) {
    throw InputError(e.what());
  }
}

Rng make_rng(const RunConfig& cfg, std::string_view purpose) {
  if (!cfg.seed) return Rng::from_os();
  Bytes b;
  append_be(b, *cfg.seed, 8);
  append(b, purpose);
  return Rng(ByteView(b));
}

VrfKeyMaterial load_keys(const fs::path& p) {
  std::istringstream in(read_file(p));
  try {
    return parse_key_material(in);
  } catch (const Error& e) {
    throw InputError(p.string() + ": " + e.what());
  }
}

// Config file path per subcommand; values apply where the command line is silent.
std::string g_config_path;

void add_run_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--config", g_config_path, "key=value configuration file");
  cmd->add_option("--group", cfg.group, "modp2048, toy64 or toy23")->capture_default_str();
  cmd->add_option("--rlwe", cfg.rlwe, "R256 or R512")->capture_default_str();
  cmd->add_option("-n,--participants", cfg.participants)->capture_default_str();
  cmd->add_option("--seed", cfg.seed, "master seed for all randomness");
  cmd->add_flag("--deterministic", cfg.deterministic, "require and use --seed for every random choice");
  cmd->add_option("-o,--out", cfg.output_dir)->capture_default_str();
}

// Subcommand config files are not read by CLI11 itself, so items are fed to
// the matching options here.
void apply_config(CLI::App* cmd) {
  if (g_config_path.empty()) return;
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigINI().from_file(g_config_path);
  } catch (const CLI::Error& e) {
    throw InputError(g_config_path + ": " + e.what());
  }
  for (const auto& item : items) {
    if (item.name == "++" || item.name == "--") continue;
    CLI::Option* opt = cmd->get_option_no_throw("--" + item.name);
    if (opt == nullptr || item.name == "config") throw InputError(g_config_path + ": unknown key " + item.name);
    if (opt->count() > 0) continue;
    try {
      opt->add_result(item.inputs);
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw InputError(g_config_path + ": " + item.name + ": " + e.what());
    }
  }
}

int cmd_keygen(const RunConfig& cfg) {
  validate(cfg);
  Rng rng = make_rng(cfg, "keygen");
  VrfKeyMaterial km = gen(SecurityConfig{cfg.group, cfg.rlwe, cfg.participants}, rng);
  fs::path out(cfg.output_dir);
  write_file(out / "keys.txt", format_key_material(km));
  write_file(out / "ring.txt", format_ring(km.group, km.ring()));
  std::cout << "wrote " << (out / "keys.txt").string() << " and " << (out / "ring.txt").string() << '\n';
  return kOk;
}

struct RoundFlags {
  std::string keys;
  std::string tamper = "none";
  std::size_t delegator = 0;
};

int cmd_round(const RunConfig& cfg, const RoundFlags& flags) {
  validate(cfg);
  VrfKeyMaterial km = load_keys(flags.keys);
  if (cfg.reveal_threshold > km.participants.size()) throw InputError("reveal threshold exceeds participants");
  if (flags.delegator >= km.participants.size()) throw InputError("delegator outside the participant set");
  if (cfg.literal_alg2 && flags.delegator != 0) throw InputError("literal signatures require delegator 0");

  std::function<void(CiphertextBytes&, VrfProof&)> tamper;
  if (flags.tamper == "c1") tamper = [](CiphertextBytes& ct, VrfProof&) { ct.c1[0] ^= 1; };
  else if (flags.tamper == "c2") tamper = [](CiphertextBytes& ct, VrfProof&) { ct.c2[0] ^= 1; };
  else if (flags.tamper == "proof") tamper = [](CiphertextBytes&, VrfProof& pi) { pi.seed.bytes[0] ^= 1; };
  else if (flags.tamper != "none") throw InputError("unknown --tamper target " + flags.tamper);

  fs::path out(cfg.output_dir);
  fs::create_directories(out);
  std::ofstream worker_log(out / "worker.log");
  std::uint64_t chain_seed = cfg.seed ? *cfg.seed : Rng::from_os()();
  RoundDriver driver(km, ContractConfig{cfg.reveal_threshold}, chain_seed, make_rng(cfg, "round"),
                     [&](const std::string& line) { worker_log << line << '\n'; });

  int rc = kOk;
  for (std::size_t r = 0; r < cfg.rounds; ++r) {
    RoundOptions opt{flags.delegator, cfg.literal_alg2 ? RingSigMode::kLiteral : RingSigMode::kGeneralized, tamper};
    RoundResult res = driver.run_round(opt);
    char name[32];
    std::snprintf(name, sizeof name, "round-%04llu", static_cast<unsigned long long>(res.round_id));
    fs::path dir = out / name;
    write_file(dir / "seed.txt", res.seed.hex() + "\n");
    write_file(dir / "ciphertext.txt", "c1=" + to_hex(res.ciphertext.c1) + "\nc2=" + to_hex(res.ciphertext.c2) + "\n");
    if (res.proof) write_file(dir / "proof.txt", format_proof(km.group, *res.proof));
    write_file(dir / "receipt.txt",
               "status=" + std::to_string(res.receipt.status) + "\nreason=" + res.receipt.reason + "\n");
    std::cout << "round " << res.round_id << " seed=" << res.seed.hex()
              << " output=" << (res.proof ? res.proof->vrf_output.hex() : std::string("-"))
              << " status=" << res.receipt.status << " (" << res.receipt.reason << ")\n";
    if (res.receipt.status != 1) rc = kFailed;
  }

  Contract c = driver.node().contract();
  write_file(out / "ring.txt", format_ring(km.group, c.ring()));
  std::string events;
  for (const auto& ev : c.events()) events += format_event(km.group, ev) + "\n";
  write_file(out / "events.log", events);
  write_file(out / "journal.txt", format_journal(km.group, c.journal()));
  write_file(out / "state.txt", c.snapshot());
  return rc;
}

int cmd_verify(const std::string& proof_path, const std::string& ring_path) {
  std::istringstream rin(read_file(ring_path));
  std::istringstream pin(read_file(proof_path));
  std::optional<std::pair<Group, Ring>> ring;
  std::pair<std::string, Bytes> proof;
  try {
    ring = parse_ring(rin);
    proof = parse_proof_file(pin);
  } catch (const Error& e) {
    throw InputError(e.what());
  }
  if (proof.first != ring->first.name()) throw InputError("proof and ring use different groups");
  VrfProof pi;
  try {
    pi = deserialize_proof(ring->first, proof.second);
  } catch (const DecodeError& e) {
    std::cout << "INVALID: " << e.what() << '\n';
    return kFailed;
  }
  if (auto v = ring_verify_detailed(ring->first, pi, ring->second); !v) {
    std::cout << "INVALID: " << v.reason << '\n';
    return kFailed;
  }
  std::cout << "VALID vrf_output=" << pi.vrf_output.hex() << '\n';
  return kOk;
}

struct NistFlags {
  std::string keys;
  std::string source = "pipeline";
  std::size_t sequences = 16;
  std::size_t bits = std::size_t{1} << 20;
  double alpha = 0.01;
  unsigned threads = 0;
};

// Byte source for the statistics commands.
std::function<Bytes(std::size_t)> make_source(const RunConfig& cfg, const std::string& source,
                                              std::optional<VrfKeyMaterial>& km, const std::string& keys) {
  if (source == "constant") return [](std::size_t n) { return Bytes(n, 0); };
  if (source == "rng") {
    auto rng = std::make_shared<Rng>(make_rng(cfg, "rng-source"));
    return [rng](std::size_t n) { return rng->bytes(n); };
  }
  if (source != "pipeline") throw InputError("unknown --source " + source);
  if (!keys.empty()) {
    km = load_keys(keys);
  } else {
    Rng rng = make_rng(cfg, "keygen");
    km = gen(SecurityConfig{"toy64", cfg.rlwe, cfg.participants}, rng);
  }
  auto stream = std::make_shared<VrfOutputStream>(*km, make_rng(cfg, "pipeline"), cfg.seed.value_or(0));
  auto pending = std::make_shared<Bytes>();
  return [stream, pending](std::size_t n) {
    while (pending->size() < n) append(*pending, stream->next().second.view());
    Bytes out(pending->begin(), pending->begin() + static_cast<std::ptrdiff_t>(n));
    pending->erase(pending->begin(), pending->begin() + static_cast<std::ptrdiff_t>(n));
    return out;
  };
}

int cmd_nist(const RunConfig& cfg, const NistFlags& f) {
  validate(cfg);
  if (f.sequences == 0 || f.bits == 0) throw InputError("sequences and bits must be positive");
  if (!(f.alpha > 0 && f.alpha < 1)) throw InputError("alpha must be in (0, 1)");
  std::optional<VrfKeyMaterial> km;
  auto source = make_source(cfg, f.source, km, f.keys);
  auto t0 = std::chrono::steady_clock::now();
  auto seqs = stats::sequences_from_stream(source, f.sequences, f.bits);
  auto t1 = std::chrono::steady_clock::now();
  stats::SuiteConfig sc;
  sc.alpha = f.alpha;
  sc.threads = f.threads;
  auto rep = stats::run_suite(seqs, sc);
  auto t2 = std::chrono::steady_clock::now();

  std::ostringstream table;
  stats::write_table(table, rep);
  std::cout << "# source=" << f.source << '\n' << table.str();
  std::cout << "# generation_s=" << std::chrono::duration<double>(t1 - t0).count()
            << " testing_s=" << std::chrono::duration<double>(t2 - t1).count() << '\n';
  fs::path out(cfg.output_dir);
  write_file(out / "nist_report.txt", table.str());
  nlohmann::json j = stats::to_json(rep);
  j["source"] = f.source;
  write_file(out / "nist_report.json", j.dump(2) + "\n");
  return kOk;
}

struct BenchFlags {
  double k = 256, n = 10, M = 1024, log_p = 11;
  bool measure = false;
};

int cmd_bench(const RunConfig& cfg, const BenchFlags& f) {
  ComplexityReport r;
  try {
    r = complexity(f.k, f.n, f.M, f.log_p);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  write_complexity(std::cout, r);
  nlohmann::json j;
  for (std::size_t i = 0; i < r.raw.size(); ++i)
    j["components"].push_back({{"name", ComplexityReport::kLabels[i]}, {"raw", r.raw[i]}, {"log2", r.log2[i]}});
  j["inputs"] = {{"k", f.k}, {"n", f.n}, {"M", f.M}, {"log_p", f.log_p}};
  j["total"] = r.total();

  if (f.measure) {
    using clock = std::chrono::steady_clock;
    auto time_us = [](auto&& fn, int reps) {
      auto t0 = clock::now();
      for (int i = 0; i < reps; ++i) fn();
      return std::chrono::duration<double, std::micro>(clock::now() - t0).count() / reps;
    };
    Group grp = Group::named(cfg.group);
    rlwe::RlweContext ctx = rlwe::RlweContext::named(cfg.rlwe);
    Rng rng = make_rng(cfg, "bench");
    Scalar x = grp.random_scalar(rng);
    rlwe::RingPoly poly{std::vector<std::uint32_t>(ctx.n(), 1)};
    Bytes msg(static_cast<std::size_t>(f.k / 8), 0xab);
    double hash = time_us([&] { (void)keccak256(ByteView(msg)); }, 1000);
    double ntt = time_us([&] { (void)ctx.ntt().forward(poly); }, 1000);
    double exp = time_us([&] { (void)grp.exp_g(x); }, 20);
    std::cout << "measured_us hashing=" << hash << " ntt=" << ntt << " exponentiation=" << exp
              << " (group=" << grp.name() << ", rlwe=" << ctx.params().name << ")\n";
    j["measured_us"] = {{"hashing", hash}, {"ntt", ntt}, {"exponentiation", exp}};
  }
  write_file(fs::path(cfg.output_dir) / "complexity.json", j.dump(2) + "\n");
  return kOk;
}

struct ReportFlags {
  std::string keys;
  std::size_t outputs = 32768;
  std::size_t vectors = 8;
};

// Distribution statistics over pipeline output plus golden (seed, output) vectors.
int cmd_report(const RunConfig& cfg, const ReportFlags& f) {
  validate(cfg);
  if (f.outputs == 0) throw InputError("outputs must be positive");
  VrfKeyMaterial km = f.keys.empty() ? [&] {
    Rng rng = make_rng(cfg, "keygen");
    return gen(SecurityConfig{"toy64", cfg.rlwe, cfg.participants}, rng);
  }()
                                     : load_keys(f.keys);
  VrfOutputStream stream(km, make_rng(cfg, "pipeline"), cfg.seed.value_or(0));
  Bytes all;
  std::string golden;
  for (std::size_t i = 0; i < f.outputs; ++i) {
    auto [seed, out] = stream.next();
    append(all, out.view());
    if (i < f.vectors) golden += seed.hex() + " " + out.hex() + "\n";
  }
  auto ones = stats::ones_ratio_blocks(stats::BitSequence::from_bytes(all), 128);
  double h = stats::empirical_shannon_entropy(all);
  auto [lo, hi] = std::minmax_element(ones.ratios.begin(), ones.ratios.end());
  std::ostringstream os;
  os << "outputs=" << f.outputs << " bytes=" << all.size() << '\n'
     << "ones_ratio_mean=" << ones.mean << " min=" << *lo << " max=" << *hi << " blocks=" << ones.ratios.size() << '\n'
     << "byte_entropy_bits=" << h << '\n'
     << "closed_form_entropy(n=1,Z=1)=" << stats::closed_form_entropy(1, 1.0) << '\n'
     << "closed_form_entropy_log2(n=" << cfg.participants
     << ",Z=1)=" << stats::closed_form_entropy_log2(static_cast<unsigned>(cfg.participants), 1.0) << '\n';
  std::cout << os.str();
  fs::path out(cfg.output_dir);
  write_file(out / "distribution.txt", os.str());
  write_file(out / "golden_vectors.txt", golden);
  nlohmann::json j{{"outputs", f.outputs},
                   {"ones_ratio_mean", ones.mean},
                   {"ones_ratio_min", *lo},
                   {"ones_ratio_max", *hi},
                   {"byte_entropy_bits", h}};
  write_file(out / "distribution.json", j.dump(2) + "\n");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Post-quantum verifiable random function toolkit"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* keygen = app.add_subcommand("keygen", "generate participant, RLWE and off-chain keys");
  add_run_options(keygen, cfg);

  RoundFlags rf;
  auto* round = app.add_subcommand("round", "run commit-reveal rounds end to end");
  add_run_options(round, cfg);
  round->add_option("--keys", rf.keys, "key file from keygen")->required();
  round->add_option("--rounds", cfg.rounds)->capture_default_str();
  round->add_option("--threshold", cfg.reveal_threshold, "reveals required (0: all)")->capture_default_str();
  round->add_option("--delegator", rf.delegator)->capture_default_str();
  round->add_option("--tamper", rf.tamper, "corrupt the submission: none, c1, c2, proof")->capture_default_str();
  round->add_flag("--literal", cfg.literal_alg2, "sign with the literal single-loop ring signature");

  std::string proof_path, ring_path;
  auto* verify_cmd = app.add_subcommand("verify", "check a proof file against a ring file");
  verify_cmd->add_option("--proof", proof_path)->required();
  verify_cmd->add_option("--ring", ring_path)->required();

  NistFlags nf;
  auto* nist = app.add_subcommand("nist", "run the eleven statistical tests on a byte stream");
  add_run_options(nist, cfg);
  nist->add_option("--keys", nf.keys, "key file (default: keys derived from --seed)");
  nist->add_option("--source", nf.source, "pipeline, rng or constant")->capture_default_str();
  nist->add_option("--sequences", nf.sequences)->capture_default_str();
  nist->add_option("--bits", nf.bits, "bits per sequence")->capture_default_str();
  nist->add_option("--alpha", nf.alpha)->capture_default_str();
  nist->add_option("--threads", nf.threads, "0: hardware concurrency")->capture_default_str();

  BenchFlags bf;
  auto* bench = app.add_subcommand("bench", "complexity model and optional timings");
  add_run_options(bench, cfg);
  bench->add_option("-k", bf.k, "hash input bits")->capture_default_str();
  bench->add_option("--n-participants", bf.n, "participants")->capture_default_str();
  bench->add_option("-M", bf.M, "polynomial degree")->capture_default_str();
  bench->add_option("--log-p", bf.log_p, "modulus bits")->capture_default_str();
  bench->add_flag("--measure", bf.measure, "also time hashing, NTT and exponentiation");

  ReportFlags pf;
  auto* report = app.add_subcommand("report", "output distribution statistics and golden vectors");
  add_run_options(report, cfg);
  report->add_option("--keys", pf.keys, "key file (default: keys derived from --seed)");
  report->add_option("--outputs", pf.outputs)->capture_default_str();
  report->add_option("--vectors", pf.vectors, "golden vectors to write")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kInputError;
  }

  try {
    for (auto* cmd : {keygen, round, nist, bench, report})
      if (*cmd) apply_config(cmd);
    if (*keygen) return cmd_keygen(cfg);
    if (*round) return cmd_round(cfg, rf);
    if (*verify_cmd) return cmd_verify(proof_path, ring_path);
    if (*nist) return cmd_nist(cfg, nf);
    if (*bench) return cmd_bench(cfg, bf);
    if (*report) return cmd_report(cfg, pf);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const DecodeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailed;
  }
  return kInputError;
}
