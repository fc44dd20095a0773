#include "core/weights.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

#include "json.hpp"

static_assert(std::endian::native == std::endian::little,
              "weight files are little-endian; byte swapping is not implemented");

namespace prox3d {
namespace {

using nlohmann::json;

constexpr char kAlphabet[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

std::string encode_base64(const unsigned char* data, std::size_t n) {
  std::string out;
  out.reserve((n + 2) / 3 * 4);
  for (std::size_t i = 0; i < n; i += 3) {
    const unsigned b0 = data[i];
    const unsigned b1 = i + 1 < n ? data[i + 1] : 0;
    const unsigned b2 = i + 2 < n ? data[i + 2] : 0;
    out.push_back(kAlphabet[b0 >> 2]);
    out.push_back(kAlphabet[((b0 & 0x3u) << 4) | (b1 >> 4)]);
    out.push_back(i + 1 < n ? kAlphabet[((b1 & 0xfu) << 2) | (b2 >> 6)] : '=');
    out.push_back(i + 2 < n ? kAlphabet[b2 & 0x3fu] : '=');
  }
  return out;
}

std::vector<unsigned char> decode_base64(const std::string& text) {
  int lookup[256];
  for (auto& v : lookup) v = -1;
  for (int i = 0; i < 64; ++i) lookup[static_cast<unsigned char>(kAlphabet[i])] = i;
  if (text.size() % 4 != 0)
    throw std::runtime_error("base64 payload length is not a multiple of 4");
  std::vector<unsigned char> out;
  out.reserve(text.size() / 4 * 3);
  for (std::size_t i = 0; i < text.size(); i += 4) {
    int vals[4];
    int pad = 0;
    for (int k = 0; k < 4; ++k) {
      const char c = text[i + k];
      if (c == '=' && i + 4 == text.size() && k >= 2) {
        vals[k] = 0;
        ++pad;
      } else {
        vals[k] = lookup[static_cast<unsigned char>(c)];
        if (vals[k] < 0) throw std::runtime_error("invalid base64 character");
      }
    }
    out.push_back(static_cast<unsigned char>((vals[0] << 2) | (vals[1] >> 4)));
    if (pad < 2)
      out.push_back(static_cast<unsigned char>(((vals[1] & 0xf) << 4) | (vals[2] >> 2)));
    if (pad < 1)
      out.push_back(static_cast<unsigned char>(((vals[2] & 0x3) << 6) | vals[3]));
  }
  return out;
}

std::string pack(const double* values, std::size_t n) {
  return encode_base64(reinterpret_cast<const unsigned char*>(values),
                       n * sizeof(double));
}

std::string pack(const Eigen::MatrixXd& m) {
  return pack(m.data(), static_cast<std::size_t>(m.size()));
}

std::string pack(const Eigen::VectorXd& v) {
  return pack(v.data(), static_cast<std::size_t>(v.size()));
}

void unpack(const json& node, const std::string& what, double* out,
            std::size_t expected) {
  if (!node.is_string())
    throw std::runtime_error("corrupt weight file: " + what + " is not a payload");
  const std::vector<unsigned char> bytes = decode_base64(node.get<std::string>());
  if (bytes.size() != expected * sizeof(double))
    throw std::runtime_error("corrupt weight file: " + what + " holds " +
                             std::to_string(bytes.size() / sizeof(double)) +
                             " values, expected " + std::to_string(expected));
  std::memcpy(out, bytes.data(), bytes.size());
}

}  // namespace

void save_weights(const NetworkParams& params, LossKind loss,
                  const std::string& path,
                  std::optional<std::uint64_t> train_seed) {
  json doc;
  doc["format"] = "prox3d-weights";
  doc["version"] = kWeightsFormatVersion;
  doc["architecture"] = {{"input_dim", params.arch.input_dim},
                         {"hidden_width", params.arch.hidden_width},
                         {"hidden_layers", params.arch.hidden_layers}};
  doc["loss"] = loss_name(loss);
  if (train_seed) doc["seed"] = *train_seed;
  doc["p_drop"] = params.p_drop;
  doc["dim_expectation"] = {params.dim_expectation[0], params.dim_expectation[1],
                            params.dim_expectation[2]};
  json layers = json::array();
  for (const Layer& layer : params.hidden) {
    layers.push_back({{"w", pack(layer.w)},
                      {"b", pack(layer.b)},
                      {"gamma", pack(layer.gamma)},
                      {"beta", pack(layer.beta)},
                      {"run_mean", pack(layer.run_mean)},
                      {"run_var", pack(layer.run_var)}});
  }
  doc["layers"] = std::move(layers);
  doc["head"] = {{"w", pack(params.head_w)}, {"b", pack(params.head_b)}};

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write weight file: " + path);
  out << doc.dump() << "\n";
  if (!out) throw std::runtime_error("failed writing weight file: " + path);
}

SavedModel load_weights(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open weight file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw std::runtime_error("corrupt weight file: " + std::string(e.what()));
  }

  try {
    if (doc.value("format", std::string{}) != "prox3d-weights")
      throw std::runtime_error("corrupt weight file: not a prox3d weight file");
    const int version = doc.at("version").get<int>();
    if (version != kWeightsFormatVersion)
      throw std::runtime_error("weight file version " + std::to_string(version) +
                               " is not supported; this build reads version " +
                               std::to_string(kWeightsFormatVersion));

    SavedModel model;
    model.loss = loss_from_name(doc.at("loss").get<std::string>());
    NetworkParams& params = model.params;
    const json& arch = doc.at("architecture");
    params.arch.input_dim = arch.at("input_dim").get<int>();
    params.arch.hidden_width = arch.at("hidden_width").get<int>();
    params.arch.hidden_layers = arch.at("hidden_layers").get<int>();
    if (params.arch.input_dim <= 0 || params.arch.hidden_width <= 0 ||
        params.arch.hidden_layers <= 0)
      throw std::runtime_error("corrupt weight file: invalid architecture");
    params.p_drop = doc.at("p_drop").get<double>();
    const json& dims = doc.at("dim_expectation");
    if (!dims.is_array() || dims.size() != 3)
      throw std::runtime_error("corrupt weight file: dim_expectation shape");
    for (int k = 0; k < 3; ++k)
      params.dim_expectation[k] = dims[static_cast<std::size_t>(k)].get<double>();

    const json& layers = doc.at("layers");
    if (!layers.is_array() ||
        layers.size() != static_cast<std::size_t>(params.arch.hidden_layers))
      throw std::runtime_error("corrupt weight file: layer count mismatch");
    params.hidden.resize(layers.size());
    const int width = params.arch.hidden_width;
    for (std::size_t l = 0; l < layers.size(); ++l) {
      Layer& layer = params.hidden[l];
      const int fan_in = l == 0 ? params.arch.input_dim : width;
      const std::string tag = "layer " + std::to_string(l) + " ";
      layer.w.resize(width, fan_in);
      unpack(layers[l].at("w"), tag + "w", layer.w.data(),
             static_cast<std::size_t>(layer.w.size()));
      for (auto [name, vec] : {std::pair<const char*, Eigen::VectorXd*>{"b", &layer.b},
                               {"gamma", &layer.gamma},
                               {"beta", &layer.beta},
                               {"run_mean", &layer.run_mean},
                               {"run_var", &layer.run_var}}) {
        vec->resize(width);
        unpack(layers[l].at(name), tag + name, vec->data(),
               static_cast<std::size_t>(width));
      }
    }
    params.head_w.resize(kOutputDim, width);
    unpack(doc.at("head").at("w"), "head w", params.head_w.data(),
           static_cast<std::size_t>(params.head_w.size()));
    params.head_b.resize(kOutputDim);
    unpack(doc.at("head").at("b"), "head b", params.head_b.data(), kOutputDim);
    return model;
  } catch (const json::exception& e) {
    throw std::runtime_error("corrupt weight file: " + std::string(e.what()));
  }
}

}  // namespace prox3d
