#include "dmm/posteriors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>

#include "dmm/common.hpp"

namespace dmm {

MessagePosteriors make_message_posteriors(const Corpus& corpus, const TrainResult& result) {
  if (result.nbar_mk.empty())
    throw input_error("training did not retain message averages");
  MessagePosteriors post;
  post.K = result.model.hyper.K;
  if (result.nbar_mk.size() != corpus.messages.size() * static_cast<size_t>(post.K))
    throw invariant_error("message average table has wrong shape");
  post.msg_ids.reserve(corpus.messages.size());
  post.user_ids.reserve(corpus.messages.size());
  post.n_m.reserve(corpus.messages.size());
  for (const Message& m : corpus.messages) {
    post.msg_ids.push_back(m.msg_id);
    post.user_ids.push_back(corpus.users[m.user].user_id);
    post.n_m.push_back(m.num_tokens);
  }
  post.nbar_mk = result.nbar_mk;
  return post;
}

DemographicVector message_posterior(const MessagePosteriors& post, size_t i) {
  if (i >= post.rows()) throw input_error("message row out of range");
  DemographicVector out;
  const double* row = post.row(i);
  const double denom = static_cast<double>(post.n_m[i]);
  for (int k = 0; k < post.K && k < kNumCategories; k++) out[k] = row[k] / denom;
  return out;
}

std::vector<UserPosterior> user_posteriors(const MessagePosteriors& post) {
  std::map<std::string_view, uint32_t> index;  // ordered, so output is sorted
  std::vector<UserPosterior> users;
  for (size_t i = 0; i < post.rows(); i++) {
    auto [it, fresh] = index.emplace(post.user_ids[i], static_cast<uint32_t>(users.size()));
    if (fresh) {
      users.emplace_back();
      users.back().user_id = post.user_ids[i];
    }
    users[it->second].message_rows.push_back(static_cast<uint32_t>(i));
  }
  std::vector<UserPosterior> sorted;
  sorted.reserve(users.size());
  for (auto& [id, ui] : index) sorted.push_back(std::move(users[ui]));
  for (auto& u : sorted) {
    std::array<double, kNumCategories> sums{};
    for (uint32_t row : u.message_rows) {
      u.tokens += post.n_m[row];
      const double* r = post.row(row);
      for (int k = 0; k < post.K && k < kNumCategories; k++) sums[static_cast<size_t>(k)] += r[k];
    }
    if (u.tokens == 0) throw invariant_error("user with zero tokens in posterior table");
    for (int k = 0; k < kNumCategories; k++)
      u.p[k] = sums[static_cast<size_t>(k)] / static_cast<double>(u.tokens);
  }
  return sorted;
}

std::vector<uint32_t> extract_aligned_users(std::span<const UserPosterior> users,
                                            const AlignSpec& spec) {
  if (spec.category < 0 || spec.category >= kNumCategories)
    throw input_error("bad alignment category");
  std::vector<uint32_t> out;
  for (uint32_t i = 0; i < users.size(); i++) {
    const auto& u = users[i];
    if (u.p[spec.category] < spec.min_posterior) continue;
    double other = 0.0;
    for (int k : spec.other_categories) {
      if (k != spec.category) other += u.p[k];
    }
    if (other < spec.other_cap) out.push_back(i);
  }
  return out;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw input_error("pearson: length mismatch");
  const size_t n = x.size();
  if (n < 2) throw input_error("pearson needs at least 2 points");
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < n; i++) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < n; i++) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw input_error("pearson undefined for a constant series");
  return sxy / std::sqrt(sxx * syy);
}

double prior_posterior_correlation(std::span<const UserPosterior> users, const Corpus& corpus,
                                   int k) {
  if (k < 0 || k >= kNumCategories) throw input_error("bad category index");
  std::vector<double> prior, posterior;
  prior.reserve(users.size());
  posterior.reserve(users.size());
  for (const auto& u : users) {
    prior.push_back(corpus.users[corpus.user_index(u.user_id)].prior[k]);
    posterior.push_back(u.p[k]);
  }
  return pearson(posterior, prior);
}

void write_posteriors(const MessagePosteriors& post, std::ostream& out) {
  out << "DMMPOST v1 " << post.K << ' ' << post.rows() << '\n';
  for (size_t i = 0; i < post.rows(); i++) {
    out << post.msg_ids[i] << '\t' << post.user_ids[i] << '\t' << post.n_m[i] << '\t';
    const double* row = post.row(i);
    for (int k = 0; k < post.K; k++) out << (k ? " " : "") << format_double(row[k]);
    out << '\n';
  }
  if (!out) throw input_error("posterior write failed");
}

void write_posteriors_file(const MessagePosteriors& post, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw input_error("cannot open for writing: " + path);
  write_posteriors(post, out);
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

uint64_t parse_count(std::string_view text) {
  uint64_t v = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw input_error("bad posterior field: '" + std::string(text) + "'");
  return v;
}

}  // namespace

MessagePosteriors read_posteriors(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw input_error("empty posterior file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto head = split(line, ' ');
  if (head.size() != 4 || head[0] != "DMMPOST" || head[1] != "v1")
    throw input_error("not a DMMPOST v1 file");
  MessagePosteriors post;
  post.K = static_cast<int>(parse_count(head[2]));
  if (post.K < 1 || post.K > 255) throw input_error("bad posterior K");
  const uint64_t rows = parse_count(head[3]);
  post.nbar_mk.reserve(rows * static_cast<size_t>(post.K));
  for (uint64_t i = 0; i < rows; i++) {
    if (!std::getline(in, line)) throw input_error("posterior file truncated");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto parts = split(line, '\t');
    if (parts.size() != 4) throw input_error("bad posterior row: '" + line + "'");
    post.msg_ids.emplace_back(parts[0]);
    post.user_ids.emplace_back(parts[1]);
    post.n_m.push_back(parse_count(parts[2]));
    auto fields = split(parts[3], ' ');
    if (fields.size() != static_cast<size_t>(post.K))
      throw input_error("bad posterior row width: '" + line + "'");
    for (auto f : fields) {
      double val = parse_double(f);
      if (!(val >= 0.0)) throw input_error("negative averaged count in posterior row");
      post.nbar_mk.push_back(val);
    }
  }
  return post;
}

MessagePosteriors read_posteriors_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("cannot open posteriors: " + path);
  return read_posteriors(in);
}

}  // namespace dmm
