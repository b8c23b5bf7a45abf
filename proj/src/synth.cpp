#include "dmm/synth.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>

#include "dmm/common.hpp"
#include "dmm/rng.hpp"

namespace dmm {

void SynthSpec::check() const {
  if (K < 1 || K > kNumCategories) throw input_error("synth K must be in [1, 4]");
  if (vocab_words < 1) throw input_error("need at least one vocabulary word");
  if (num_users < 1 || msgs_per_user < 1 || tokens_per_msg < 1)
    throw input_error("synth sizes must be positive");
  if (!(alpha > 0.0)) throw input_error("alpha must be positive");
  if (!(beta_per_word > 0.0)) throw input_error("beta_per_word must be positive");
  if (!user_priors.empty() && user_priors.size() != num_users)
    throw input_error("user prior list does not match num_users");
}

namespace {

std::string padded(const char* prefix, uint32_t n, int width) {
  std::string digits = std::to_string(n);
  std::string out(prefix);
  for (int i = static_cast<int>(digits.size()); i < width; i++) out.push_back('0');
  return out + digits;
}

}  // namespace

SynthResult generate_synthetic(const SynthSpec& spec) {
  spec.check();
  const int K = spec.K;
  const uint32_t W = spec.vocab_words;
  Rng rng(spec.seed);

  // Priors first, then phi*, then messages: one fixed draw order keeps the
  // output reproducible byte for byte.
  std::vector<DemographicVector> priors = spec.user_priors;
  if (priors.empty()) {
    priors.resize(spec.num_users);
    const double ones[kNumCategories] = {1.0, 1.0, 1.0, 1.0};
    std::vector<double> draw(static_cast<size_t>(K));
    for (auto& p : priors) {
      rng.dirichlet(ones, K, draw.data());
      for (int k = 0; k < K; k++) p[k] = draw[static_cast<size_t>(k)];
    }
  }

  SynthResult result;
  result.phi_star.assign((static_cast<size_t>(W) + 1) * K, 0.0);
  std::vector<std::vector<double>> phi_cdf(static_cast<size_t>(K));
  {
    std::vector<double> beta_vec(W, spec.beta_per_word);
    std::vector<double> column(W);
    for (int k = 0; k < K; k++) {
      rng.dirichlet(beta_vec.data(), static_cast<int>(W), column.data());
      auto& cdf = phi_cdf[static_cast<size_t>(k)];
      cdf.resize(W);
      double cum = 0.0;
      for (uint32_t w = 0; w < W; w++) {
        result.phi_star[(static_cast<size_t>(w) + 1) * K + k] = column[w];
        cum += column[w];
        cdf[w] = cum;
      }
      cdf[W - 1] = 1.0;  // guard against rounding at the top end
    }
  }

  const int width = static_cast<int>(std::to_string(spec.num_users - 1).size());
  std::vector<std::string> words;
  words.reserve(W);
  const int wwidth = static_cast<int>(std::to_string(W - 1).size());
  for (uint32_t w = 0; w < W; w++) words.push_back(padded("w", w, wwidth));
  result.corpus.vocab = Vocabulary(std::move(words));

  std::vector<double> alpha_pi(static_cast<size_t>(K));
  std::vector<double> theta(static_cast<size_t>(K));
  std::vector<uint32_t> tokens(spec.tokens_per_msg);
  uint32_t msg_counter = 0;
  const int mwidth =
      static_cast<int>(std::to_string(spec.num_users * spec.msgs_per_user - 1).size());
  for (uint32_t u = 0; u < spec.num_users; u++) {
    const std::string user_id = padded("u", u, width);
    for (int k = 0; k < K; k++) alpha_pi[static_cast<size_t>(k)] = spec.alpha * priors[u][k];
    for (uint32_t j = 0; j < spec.msgs_per_user; j++) {
      rng.dirichlet(alpha_pi.data(), K, theta.data());
      for (uint32_t t = 0; t < spec.tokens_per_msg; t++) {
        const int z = rng.categorical(theta.data(), K);
        const auto& cdf = phi_cdf[static_cast<size_t>(z)];
        const double u01 = rng.next_double();
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u01);
        const uint32_t w = static_cast<uint32_t>(it == cdf.end() ? W - 1 : it - cdf.begin());
        tokens[t] = w + 1;  // shift past the OOV id
      }
      result.corpus.add_message(padded("m", msg_counter++, mwidth), user_id, priors[u],
                                std::vector<uint32_t>(tokens));
    }
  }
  result.corpus.finalize_priors();
  return result;
}

void write_phi(std::span<const double> phi, int k, uint32_t v, std::ostream& out) {
  if (phi.size() != static_cast<size_t>(v) * static_cast<size_t>(k))
    throw invariant_error("phi table has wrong shape");
  out << "DMMPHI v1 " << k << ' ' << v << '\n';
  for (uint32_t w = 0; w < v; w++) {
    for (int j = 0; j < k; j++)
      out << (j ? " " : "") << format_double(phi[static_cast<size_t>(w) * k + j]);
    out << '\n';
  }
  if (!out) throw input_error("phi write failed");
}

void write_phi_file(std::span<const double> phi, int k, uint32_t v, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw input_error("cannot open for writing: " + path);
  write_phi(phi, k, v, out);
}

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  size_t start = 0;
  while (true) {
    size_t end = s.find(sep, start);
    if (end == std::string_view::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, end - start));
    start = end + 1;
  }
}

}  // namespace

PhiTable read_phi(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw input_error("empty phi file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto head = split(line, ' ');
  if (head.size() != 4 || head[0] != "DMMPHI" || head[1] != "v1")
    throw input_error("not a DMMPHI v1 file");
  PhiTable table;
  {
    uint64_t kval = 0, vval = 0;
    auto r1 = std::from_chars(head[2].data(), head[2].data() + head[2].size(), kval);
    auto r2 = std::from_chars(head[3].data(), head[3].data() + head[3].size(), vval);
    if (r1.ec != std::errc() || r2.ec != std::errc() || kval == 0 || kval > 255 || vval == 0)
      throw input_error("bad phi header");
    table.K = static_cast<int>(kval);
    table.v = static_cast<uint32_t>(vval);
  }
  table.values.reserve(static_cast<size_t>(table.v) * table.K);
  for (uint32_t w = 0; w < table.v; w++) {
    if (!std::getline(in, line)) throw input_error("phi file truncated");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto fields = split(line, ' ');
    if (fields.size() != static_cast<size_t>(table.K)) throw input_error("bad phi row");
    for (auto f : fields) table.values.push_back(parse_double(f));
  }
  return table;
}

PhiTable read_phi_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("cannot open phi file: " + path);
  return read_phi(in);
}

}  // namespace dmm
