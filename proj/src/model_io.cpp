#include "restrictml/model_io.hpp"

#include <fstream>

namespace restrictml {

namespace {

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
    return json{{"rows", m.rows}, {"cols", m.cols}, {"data", m.data}};
}

Matrix matrix_from_json(const json& j) {
    return Matrix(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>(),
                  j.at("data").get<std::vector<double>>());
}

json pca_to_json(const PcaModel& pca) {
    return json{{"mean", pca.mean},
                {"scale", pca.scale},
                {"components", matrix_to_json(pca.components)},
                {"explained_variance", pca.explained_variance}};
}

PcaModel pca_from_json(const json& j) {
    PcaModel pca;
    pca.mean = j.at("mean").get<std::vector<double>>();
    pca.scale = j.at("scale").get<std::vector<double>>();
    pca.components = matrix_from_json(j.at("components"));
    pca.explained_variance = j.at("explained_variance").get<std::vector<double>>();
    return pca;
}

const char* kernel_name(KernelKind kind) {
    switch (kind) {
        case KernelKind::Linear: return "linear";
        case KernelKind::Polynomial: return "poly";
        case KernelKind::Rbf: return "rbf";
        case KernelKind::Sigmoid: return "sigmoid";
    }
    return "linear";
}

KernelKind kernel_from_name(const std::string& name) {
    if (name == "linear") return KernelKind::Linear;
    if (name == "poly") return KernelKind::Polynomial;
    if (name == "rbf") return KernelKind::Rbf;
    if (name == "sigmoid") return KernelKind::Sigmoid;
    throw ParseError("unknown kernel '" + name + "'");
}

}  // namespace

nlohmann::json svm_model_to_json(const SvmModel& model) {
    json doc;
    doc["type"] = "svm";
    doc["kernel"] = {{"kind", kernel_name(model.kernel.kind)},
                     {"degree", model.kernel.degree},
                     {"gamma", model.kernel.gamma},
                     {"coef0", model.kernel.coef0}};
    doc["c_penalty"] = model.c_penalty;
    doc["tolerance"] = model.tolerance;
    doc["bias"] = model.bias;
    doc["support_vectors"] = matrix_to_json(model.support_vectors);
    doc["dual_coefficients"] = model.dual_coefficients;
    if (model.pca.has_value()) {
        doc["pca"] = pca_to_json(*model.pca);
    }
    return doc;
}

SvmModel svm_model_from_json(const nlohmann::json& doc) {
    SvmModel model;
    const json& k = doc.at("kernel");
    model.kernel.kind = kernel_from_name(k.at("kind").get<std::string>());
    model.kernel.degree = k.at("degree").get<int>();
    model.kernel.gamma = k.at("gamma").get<double>();
    model.kernel.coef0 = k.at("coef0").get<double>();
    model.c_penalty = doc.at("c_penalty").get<double>();
    model.tolerance = doc.at("tolerance").get<double>();
    model.bias = doc.at("bias").get<double>();
    model.support_vectors = matrix_from_json(doc.at("support_vectors"));
    model.dual_coefficients = doc.at("dual_coefficients").get<std::vector<double>>();
    if (doc.contains("pca")) {
        model.pca = pca_from_json(doc.at("pca"));
    }
    return model;
}

nlohmann::json forest_model_to_json(const ForestModel& model) {
    json trees = json::array();
    for (const DecisionTree& tree : model.trees) {
        json nodes = json::array();
        for (const TreeNode& node : tree.nodes) {
            nodes.push_back({{"feature", node.feature},
                             {"threshold", node.threshold},
                             {"left", node.left},
                             {"right", node.right},
                             {"leaf_class", node.leaf_class},
                             {"counts", node.counts}});
        }
        trees.push_back(std::move(nodes));
    }
    json doc;
    doc["type"] = "forest";
    doc["trees"] = std::move(trees);
    doc["n_trees"] = model.params.n_trees;
    doc["features_per_node"] = model.params.features_per_node;
    doc["max_depth"] = model.params.max_depth;
    doc["seed"] = model.params.seed;
    doc["classic_bootstrap"] = model.params.classic_bootstrap;
    doc["oob_error"] = model.oob_error;
    return doc;
}

ForestModel forest_model_from_json(const nlohmann::json& doc) {
    ForestModel model;
    for (const json& tree_json : doc.at("trees")) {
        DecisionTree tree;
        for (const json& node_json : tree_json) {
            TreeNode node;
            node.feature = node_json.at("feature").get<int>();
            node.threshold = node_json.at("threshold").get<double>();
            node.left = node_json.at("left").get<std::int32_t>();
            node.right = node_json.at("right").get<std::int32_t>();
            node.leaf_class = node_json.at("leaf_class").get<std::int32_t>();
            node.counts = node_json.at("counts").get<std::array<std::uint32_t, 2>>();
            tree.nodes.push_back(node);
        }
        model.trees.push_back(std::move(tree));
    }
    model.params.n_trees = doc.at("n_trees").get<std::size_t>();
    model.params.features_per_node = doc.at("features_per_node").get<std::size_t>();
    model.params.max_depth = doc.at("max_depth").get<std::size_t>();
    model.params.seed = doc.at("seed").get<std::uint64_t>();
    model.params.classic_bootstrap = doc.at("classic_bootstrap").get<bool>();
    model.oob_error = doc.at("oob_error").get<double>();
    return model;
}

nlohmann::json network_to_json(const NetworkState& state) {
    const NetworkSpec& spec = state.spec;
    json doc;
    doc["type"] = "cnn";
    doc["spec"] = {{"input_width", spec.input_width},
                   {"conv1",
                    {{"filters", spec.conv1.filters},
                     {"kernel", spec.conv1.kernel},
                     {"stride", spec.conv1.stride}}},
                   {"conv2",
                    {{"filters", spec.conv2.filters},
                     {"kernel", spec.conv2.kernel},
                     {"stride", spec.conv2.stride}}},
                   {"dropout_rate", spec.dropout_rate},
                   {"pool_size", spec.pool_size},
                   {"dense_units", spec.dense_units},
                   {"classes", spec.classes},
                   {"kernel_l2", spec.kernel_l2},
                   {"activity_l1", spec.activity_l1}};
    doc["shape_trace"] = net_shape_trace(spec);
    doc["rng_seed"] = state.rng_seed;
    doc["weights"] = {{"w_conv1", matrix_to_json(state.w_conv1)},
                      {"b_conv1", state.b_conv1},
                      {"w_conv2", matrix_to_json(state.w_conv2)},
                      {"b_conv2", state.b_conv2},
                      {"w_dense1", matrix_to_json(state.w_dense1)},
                      {"b_dense1", state.b_dense1},
                      {"w_dense2", matrix_to_json(state.w_dense2)},
                      {"b_dense2", state.b_dense2}};
    return doc;
}

NetworkState network_from_json(const nlohmann::json& doc) {
    NetworkState state;
    const json& s = doc.at("spec");
    state.spec.input_width = s.at("input_width").get<std::size_t>();
    auto conv = [&s](const char* key, Activation act) {
        const json& c = s.at(key);
        return Conv1dSpec{c.at("filters").get<std::size_t>(),
                          c.at("kernel").get<std::size_t>(),
                          c.at("stride").get<std::size_t>(), act};
    };
    state.spec.conv1 = conv("conv1", Activation::Softplus);
    state.spec.conv2 = conv("conv2", Activation::Linear);
    state.spec.dropout_rate = s.at("dropout_rate").get<double>();
    state.spec.pool_size = s.at("pool_size").get<std::size_t>();
    state.spec.dense_units = s.at("dense_units").get<std::size_t>();
    state.spec.classes = s.at("classes").get<std::size_t>();
    state.spec.kernel_l2 = s.at("kernel_l2").get<double>();
    state.spec.activity_l1 = s.at("activity_l1").get<double>();
    state.rng_seed = doc.at("rng_seed").get<std::uint64_t>();

    const json& w = doc.at("weights");
    state.w_conv1 = matrix_from_json(w.at("w_conv1"));
    state.b_conv1 = w.at("b_conv1").get<std::vector<double>>();
    state.w_conv2 = matrix_from_json(w.at("w_conv2"));
    state.b_conv2 = w.at("b_conv2").get<std::vector<double>>();
    state.w_dense1 = matrix_from_json(w.at("w_dense1"));
    state.b_dense1 = w.at("b_dense1").get<std::vector<double>>();
    state.w_dense2 = matrix_from_json(w.at("w_dense2"));
    state.b_dense2 = w.at("b_dense2").get<std::vector<double>>();
    return state;
}

void save_model_file(const std::string& path, nlohmann::json model,
                     nlohmann::json manifest) {
    if (!manifest.empty()) {
        model["manifest"] = std::move(manifest);
    }
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open for writing: " + path);
    }
    out << model.dump(2) << '\n';
    if (!out) {
        throw IoError("write failed: " + path);
    }
}

nlohmann::json load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open model file: " + path);
    }
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ParseError("invalid model JSON in " + path + ": " + e.what());
    }
    return doc;
}

std::string model_type(const nlohmann::json& doc) {
    if (!doc.contains("type")) {
        throw ParseError("model file has no 'type' field");
    }
    return doc.at("type").get<std::string>();
}

}  // namespace restrictml
