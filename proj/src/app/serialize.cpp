#include "dentvis/app/serialize.hpp"

namespace dentvis::app {

using nlohmann::json;

namespace {

NamedTensor from_matrix(std::string name, const MatrixF& m) {
  return {std::move(name), {m.rows(), m.cols()}, m.data()};
}

MatrixF to_matrix(const NamedTensor& t) {
  require(t.shape.size() == 2, Errc::MalformedHeader, "tensor '" + t.name + "' must be 2-D");
  return MatrixF(t.shape[0], t.shape[1], t.data);
}

NamedTensor from_values(std::string name, const auto& values) {
  NamedTensor t{std::move(name), {values.size()}, {}};
  for (auto v : values) t.data.push_back(static_cast<float>(v));
  return t;
}

std::vector<std::uint32_t> to_ids(const NamedTensor& t) {
  std::vector<std::uint32_t> out;
  for (float v : t.data) {
    require(v >= 0.0f && v == static_cast<float>(static_cast<std::uint32_t>(v)), Errc::MalformedHeader,
            "tensor '" + t.name + "' holds a non-integer id");
    out.push_back(static_cast<std::uint32_t>(v));
  }
  return out;
}

json kernel_json(const KernelSpec& k) {
  return {{"kind", k.kind == KernelKind::Linear ? "linear" : "gaussian"}, {"gamma", k.gamma}};
}

KernelSpec kernel_from(const json& j) {
  KernelSpec k;
  k.kind = j.at("kind").get<std::string>() == "linear" ? KernelKind::Linear : KernelKind::Gaussian;
  k.gamma = j.at("gamma").get<double>();
  return k;
}

}  // namespace

json layers_to_json(const std::vector<nn::LayerSpec>& layers) {
  json out = json::array();
  for (const auto& l : layers) {
    json j = {{"type", nn::layer_name(l)}};
    if (const auto* c = std::get_if<nn::Conv2d>(&l)) {
      j["out_ch"] = c->out_ch;
      j["kh"] = c->kh;
      j["kw"] = c->kw;
      j["stride"] = c->stride;
      j["pad"] = c->pad == nn::Padding::Same ? "same" : "valid";
    } else if (const auto* p = std::get_if<nn::MaxPool2d>(&l)) {
      j["size"] = p->size;
    } else if (const auto* d = std::get_if<nn::Dense>(&l)) {
      j["out"] = d->out;
    }
    out.push_back(std::move(j));
  }
  return out;
}

std::vector<nn::LayerSpec> layers_from_json(const json& j) {
  std::vector<nn::LayerSpec> out;
  for (const auto& l : j) {
    const std::string type = l.at("type").get<std::string>();
    if (type == "conv2d")
      out.emplace_back(nn::Conv2d{l.at("out_ch").get<std::size_t>(), l.at("kh").get<std::size_t>(),
                                  l.at("kw").get<std::size_t>(), l.at("stride").get<std::size_t>(),
                                  l.at("pad").get<std::string>() == "same" ? nn::Padding::Same : nn::Padding::Valid});
    else if (type == "relu")
      out.emplace_back(nn::ReLU{});
    else if (type == "maxpool2d")
      out.emplace_back(nn::MaxPool2d{l.at("size").get<std::size_t>()});
    else if (type == "flatten")
      out.emplace_back(nn::Flatten{});
    else if (type == "dense")
      out.emplace_back(nn::Dense{l.at("out").get<std::size_t>()});
    else if (type == "sigmoid")
      out.emplace_back(nn::Sigmoid{});
    else if (type == "softmax")
      out.emplace_back(nn::Softmax{});
    else
      fail(Errc::MalformedHeader, "unknown layer type '" + type + "'");
  }
  return out;
}

ModelContainer model_to_container(const Model& m) {
  ModelContainer c;
  c.seed = m.config.seed;
  c.hyperparameters = to_json(m.config);
  c.meta["task"] = task_name(m.task);
  c.meta["classes"] = m.classes;
  if (const auto* net = std::get_if<nn::Network<float>>(&m.impl)) {
    c.module = "cnn";
    c.meta["input_shape"] = net->input_shape;
    c.meta["layers"] = layers_to_json(net->layers);
    for (std::size_t i = 0; i < net->params.size(); ++i) {
      const auto& p = net->params[i];
      if (p.empty()) continue;
      c.tensors.push_back({"layer" + std::to_string(i) + ".weight", p.weight.shape(),
                           std::vector<float>(p.weight.values().begin(), p.weight.values().end())});
      c.tensors.push_back({"layer" + std::to_string(i) + ".bias", p.bias.shape(),
                           std::vector<float>(p.bias.values().begin(), p.bias.values().end())});
    }
    return c;
  }
  const auto& bow = std::get<BowModel>(m.impl);
  c.module = "bow";
  c.tensors.push_back(from_matrix("codebook", bow.codebook.centers()));
  if (const auto* knn = std::get_if<KnnModel>(&bow.classifier)) {
    c.meta["classifier"] = "knn";
    c.meta["k"] = knn->k;
    c.meta["n_classes"] = knn->n_classes;
    c.tensors.push_back(from_matrix("knn.train_x", knn->train_x));
    c.tensors.push_back(from_values("knn.train_y", knn->train_y));
    return c;
  }
  const auto& ecoc = std::get<EcocModel>(bow.classifier);
  c.meta["classifier"] = "ecoc_svm";
  c.meta["learners"] = ecoc.learners.size();
  c.meta["ecoc_classes"] = ecoc.classes;
  json learners = json::array();
  NamedTensor coding{"ecoc.coding", {ecoc.coding.rows(), ecoc.coding.cols()}, {}};
  for (auto v : ecoc.coding.data()) coding.data.push_back(static_cast<float>(v));
  c.tensors.push_back(std::move(coding));
  for (std::size_t l = 0; l < ecoc.learners.size(); ++l) {
    const BinarySvm& s = ecoc.learners[l];
    learners.push_back({{"bias", s.bias}, {"c", s.c}, {"kernel", kernel_json(s.kernel)}});
    c.tensors.push_back(from_matrix("svm" + std::to_string(l) + ".support_x", s.support_x));
    c.tensors.push_back(from_values("svm" + std::to_string(l) + ".alpha_y", s.alpha_y));
  }
  c.meta["svm"] = std::move(learners);
  return c;
}

Model model_from_container(const ModelContainer& c) {
  Model m;
  try {
    m.config = parse_config(c.hyperparameters);
    m.task = parse_task(c.meta.at("task").get<std::string>());
    m.classes = c.meta.at("classes").get<std::vector<std::uint32_t>>();
    if (c.module == "cnn") {
      auto net = nn::make_network<float>(c.meta.at("input_shape").get<nn::Shape>(), layers_from_json(c.meta.at("layers")));
      for (std::size_t i = 0; i < net.params.size(); ++i) {
        auto& p = net.params[i];
        if (p.empty()) continue;
        const auto& w = c.tensor("layer" + std::to_string(i) + ".weight");
        const auto& b = c.tensor("layer" + std::to_string(i) + ".bias");
        require(w.shape == p.weight.shape() && b.shape == p.bias.shape(), Errc::MalformedHeader,
                "layer " + std::to_string(i) + " parameter shapes differ from the architecture");
        p.weight = nn::Tensor<float>(w.shape, w.data);
        p.bias = nn::Tensor<float>(b.shape, b.data);
      }
      require(net.output_shape() == nn::Shape{m.classes.size()}, Errc::MalformedHeader,
              "network output does not match class count");
      m.impl = std::move(net);
      return m;
    }
    require(c.module == "bow", Errc::MalformedHeader, "unknown model module '" + c.module + "'");
    BowModel bow;
    bow.codebook = Codebook(to_matrix(c.tensor("codebook")));
    if (c.meta.at("classifier").get<std::string>() == "knn") {
      bow.classifier = knn_fit(to_matrix(c.tensor("knn.train_x")), to_ids(c.tensor("knn.train_y")),
                               c.meta.at("k").get<std::size_t>(), c.meta.at("n_classes").get<std::size_t>());
    } else {
      EcocModel e;
      e.classes = c.meta.at("ecoc_classes").get<std::vector<std::uint32_t>>();
      const auto& coding = c.tensor("ecoc.coding");
      require(coding.shape.size() == 2, Errc::MalformedHeader, "coding matrix must be 2-D");
      e.coding = CodingMatrix(coding.shape[0], coding.shape[1]);
      for (std::size_t i = 0; i < coding.data.size(); ++i) e.coding.data()[i] = static_cast<std::int8_t>(coding.data[i]);
      const auto& learners = c.meta.at("svm");
      for (std::size_t l = 0; l < learners.size(); ++l) {
        BinarySvm s;
        s.bias = learners[l].at("bias").get<double>();
        s.c = learners[l].at("c").get<double>();
        s.kernel = kernel_from(learners[l].at("kernel"));
        s.support_x = to_matrix(c.tensor("svm" + std::to_string(l) + ".support_x"));
        for (float v : c.tensor("svm" + std::to_string(l) + ".alpha_y").data) s.alpha_y.push_back(v);
        e.learners.push_back(std::move(s));
      }
      require(e.learners.size() == e.coding.cols(), Errc::MalformedHeader, "learner count differs from coding");
      bow.classifier = std::move(e);
    }
    m.impl = std::move(bow);
  } catch (const json::exception& e) {
    fail(Errc::MalformedHeader, std::string("model header: ") + e.what());
  }
  return m;
}

ModelContainer descriptors_to_container(const DescriptorSet& d, const json& meta) {
  ModelContainer c;
  c.module = "descriptors";
  c.meta = meta;
  c.meta["count"] = d.size();
  c.meta["dim"] = d.dim();
  c.tensors.push_back({"vectors", {d.size(), d.dim()}, d.vectors().data()});
  NamedTensor centers{"centers", {d.size(), 2}, {}};
  for (const auto& ctr : d.centers()) centers.data.insert(centers.data.end(), ctr.begin(), ctr.end());
  c.tensors.push_back(std::move(centers));
  return c;
}

DescriptorSet descriptors_from_container(const ModelContainer& c) {
  require(c.module == "descriptors", Errc::MalformedHeader, "not a descriptor store");
  const auto& v = c.tensor("vectors");
  const auto& ctr = c.tensor("centers");
  require(v.shape.size() == 2 && ctr.shape.size() == 2 && v.shape[0] == ctr.shape[0], Errc::MalformedHeader,
          "descriptor tensors disagree");
  DescriptorSet d(v.shape[1]);
  for (std::size_t i = 0; i < v.shape[0]; ++i)
    d.add({ctr.data[2 * i], ctr.data[2 * i + 1]},
          std::span<const float>(v.data.data() + i * v.shape[1], v.shape[1]));
  return d;
}

}  // namespace dentvis::app
