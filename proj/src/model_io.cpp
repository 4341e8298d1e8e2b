#include "rffhsi/model_io.hpp"

#include <array>
#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

#include "rffhsi/io.hpp"

namespace rffhsi {

using nlohmann::json;

namespace {

constexpr char kMagic[8] = {'R', 'F', 'F', 'H', 'S', 'I', 'M', '1'};
constexpr std::uint32_t kVersion = 1;

std::array<std::uint32_t, 256> make_crc_table() {
    std::array<std::uint32_t, 256> table{};
    for (std::uint32_t i = 0; i < 256; ++i) {
        std::uint32_t c = i;
        for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xedb88320u ^ (c >> 1) : c >> 1;
        table[i] = c;
    }
    return table;
}

void append_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out += static_cast<char>((v >> (8 * i)) & 0xff);
}

void append_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out += static_cast<char>((v >> (8 * i)) & 0xff);
}

void append_string(std::string& out, const std::string& s) {
    append_u32(out, static_cast<std::uint32_t>(s.size()));
    out += s;
}

class Reader {
public:
    Reader(const std::string& data, const std::string& path) : data_(data), path_(path) {}

    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
        pos_ += 4;
        return v;
    }

    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i)
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
        pos_ += 8;
        return v;
    }

    std::string string() {
        const std::uint32_t len = u32();
        need(len);
        std::string s = data_.substr(pos_, len);
        pos_ += len;
        return s;
    }

    void raw(void* dst, std::size_t bytes) {
        need(bytes);
        std::memcpy(dst, data_.data() + pos_, bytes);
        pos_ += bytes;
    }

    std::size_t position() const { return pos_; }

private:
    void need(std::size_t bytes) {
        if (pos_ + bytes > data_.size())
            throw_format("'" + path_ + "' is truncated");
    }

    const std::string& data_;
    const std::string& path_;
    std::size_t pos_ = 0;
};

}  // namespace

std::uint32_t crc32(const unsigned char* data, std::size_t length, std::uint32_t seed) {
    static const auto table = make_crc_table();
    std::uint32_t c = seed ^ 0xffffffffu;
    for (std::size_t i = 0; i < length; ++i) c = table[(c ^ data[i]) & 0xff] ^ (c >> 8);
    return c ^ 0xffffffffu;
}

std::uint64_t ArraySection::element_count() const {
    std::uint64_t n = 1;
    for (std::uint64_t dim : shape) n *= dim;
    return n;
}

const ArraySection& ModelContainer::section(const std::string& name) const {
    for (const auto& s : sections)
        if (s.name == name) return s;
    throw_format("model container has no section '" + name + "'");
}

bool ModelContainer::has_section(const std::string& name) const {
    for (const auto& s : sections)
        if (s.name == name) return true;
    return false;
}

void save_container(const std::string& path, const ModelContainer& container) {
    std::string out(kMagic, 8);
    append_u32(out, kVersion);
    append_string(out, container.method);
    append_string(out, container.metadata_json);
    append_u32(out, static_cast<std::uint32_t>(container.sections.size()));
    for (const auto& section : container.sections) {
        append_string(out, section.name);
        out += static_cast<char>(section.dtype);
        out += static_cast<char>(section.shape.size());
        for (std::uint64_t dim : section.shape) append_u64(out, dim);
        const std::uint64_t count = section.element_count();
        if (section.dtype == ArraySection::DType::f64) {
            if (section.f64.size() != count) throw_dimension("section '" + section.name + "' shape mismatch");
            out.append(reinterpret_cast<const char*>(section.f64.data()), count * 8);
        } else {
            if (section.i64.size() != count) throw_dimension("section '" + section.name + "' shape mismatch");
            out.append(reinterpret_cast<const char*>(section.i64.data()), count * 8);
        }
    }
    append_u32(out, crc32(reinterpret_cast<const unsigned char*>(out.data()), out.size()));
    write_file_atomic(path, out);
}

ModelContainer load_container(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw_io("cannot open '" + path + "' for reading");
    std::string data((std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());

    if (data.size() < 16 || std::memcmp(data.data(), kMagic, 8) != 0)
        throw_format("'" + path + "' is not a model container");
    std::uint32_t trailer = 0;  // little-endian, like every integer here
    for (int i = 0; i < 4; ++i)
        trailer |= static_cast<std::uint32_t>(
                       static_cast<unsigned char>(data[data.size() - 4 + static_cast<std::size_t>(i)]))
                   << (8 * i);
    const std::uint32_t computed = crc32(
        reinterpret_cast<const unsigned char*>(data.data()), data.size() - 4);
    if (trailer != computed)
        throw_format("'" + path + "' failed its checksum; the file is corrupt");

    Reader reader(data, path);
    char magic[8];
    reader.raw(magic, 8);
    const std::uint32_t version = reader.u32();
    if (version != kVersion)
        throw_format("'" + path + "' has container version " + std::to_string(version) +
                     "; expected " + std::to_string(kVersion));

    ModelContainer container;
    container.method = reader.string();
    container.metadata_json = reader.string();
    const std::uint32_t section_count = reader.u32();
    for (std::uint32_t s = 0; s < section_count; ++s) {
        ArraySection section;
        section.name = reader.string();
        char dtype;
        reader.raw(&dtype, 1);
        if (dtype != 0 && dtype != 1) throw_format("'" + path + "' has an unknown section dtype");
        section.dtype = static_cast<ArraySection::DType>(dtype);
        char ndim;
        reader.raw(&ndim, 1);
        for (int i = 0; i < ndim; ++i) section.shape.push_back(reader.u64());
        const std::uint64_t count = section.element_count();
        if (section.dtype == ArraySection::DType::f64) {
            section.f64.resize(count);
            reader.raw(section.f64.data(), count * 8);
        } else {
            section.i64.resize(count);
            reader.raw(section.i64.data(), count * 8);
        }
        container.sections.push_back(std::move(section));
    }
    return container;
}

ArraySection matrix_section(const std::string& name, const Matrix& m) {
    ArraySection s;
    s.name = name;
    s.dtype = ArraySection::DType::f64;
    s.shape = {static_cast<std::uint64_t>(m.rows()), static_cast<std::uint64_t>(m.cols())};
    s.f64.assign(m.data(), m.data() + m.size());  // column-major payload
    return s;
}

Matrix section_to_matrix(const ArraySection& s) {
    if (s.shape.size() != 2 || s.dtype != ArraySection::DType::f64)
        throw_format("section '" + s.name + "' is not an f64 matrix");
    Matrix m(static_cast<std::int64_t>(s.shape[0]), static_cast<std::int64_t>(s.shape[1]));
    std::memcpy(m.data(), s.f64.data(), s.f64.size() * 8);
    return m;
}

ArraySection vector_section(const std::string& name, const Vector& v) {
    ArraySection s;
    s.name = name;
    s.dtype = ArraySection::DType::f64;
    s.shape = {static_cast<std::uint64_t>(v.size())};
    s.f64.assign(v.data(), v.data() + v.size());
    return s;
}

Vector section_to_vector(const ArraySection& s) {
    if (s.shape.size() != 1 || s.dtype != ArraySection::DType::f64)
        throw_format("section '" + s.name + "' is not an f64 vector");
    Vector v(static_cast<std::int64_t>(s.shape[0]));
    std::memcpy(v.data(), s.f64.data(), s.f64.size() * 8);
    return v;
}

namespace {

ArraySection index_section(const std::string& name, const std::vector<std::int64_t>& values) {
    ArraySection s;
    s.name = name;
    s.dtype = ArraySection::DType::i64;
    s.shape = {static_cast<std::uint64_t>(values.size())};
    s.i64 = values;
    return s;
}

ArraySection scalar_section(const std::string& name, double value) {
    ArraySection s;
    s.name = name;
    s.dtype = ArraySection::DType::f64;
    s.shape = {1};
    s.f64 = {value};
    return s;
}

double scalar_of(const ModelContainer& c, const std::string& name) {
    const auto& s = c.section(name);
    if (s.dtype != ArraySection::DType::f64 || s.f64.size() != 1)
        throw_format("section '" + name + "' is not a scalar");
    return s.f64[0];
}

json spec_to_json(const ReducerSpec& spec) {
    json j;
    j["method"] = to_string(spec.method);
    j["components"] = spec.components;
    j["rff_features"] = spec.rff_features;
    j["landmarks"] = spec.landmarks;
    if (spec.sigma) j["sigma_override"] = *spec.sigma;
    else j["sigma_override"] = nullptr;
    j["seed"] = spec.seed;
    j["centered_kernel"] = spec.centered_kernel == KernelCentering::automatic
                               ? "auto"
                               : (spec.centered_kernel == KernelCentering::on ? "on" : "off");
    j["bandwidth_rule"] =
        spec.bandwidth_rule == BandwidthRule::mean_squared_distance ? "mean-squared" : "mean";
    j["max_pairs"] = spec.max_pairs;
    j["nonlinearity"] = spec.nonlinearity == IcaNonlinearity::logcosh ? "logcosh" : "cube";
    j["ica_tol"] = spec.ica_tol;
    j["ica_max_iter"] = spec.ica_max_iter;
    j["lda_ridge"] = spec.lda_ridge;
    return j;
}

ReducerSpec spec_from_json(const json& j) {
    ReducerSpec spec;
    spec.method = reducer_method_from_string(j.at("method").get<std::string>());
    spec.components = j.at("components").get<int>();
    spec.rff_features = j.at("rff_features").get<int>();
    spec.landmarks = j.at("landmarks").get<int>();
    if (!j.at("sigma_override").is_null()) spec.sigma = j.at("sigma_override").get<double>();
    spec.seed = j.at("seed").get<std::uint64_t>();
    const std::string centered = j.at("centered_kernel").get<std::string>();
    spec.centered_kernel = centered == "auto" ? KernelCentering::automatic
                          : centered == "on" ? KernelCentering::on
                                             : KernelCentering::off;
    spec.bandwidth_rule = j.at("bandwidth_rule").get<std::string>() == "mean-squared"
                              ? BandwidthRule::mean_squared_distance
                              : BandwidthRule::mean_distance;
    spec.max_pairs = j.at("max_pairs").get<std::int64_t>();
    spec.nonlinearity = j.at("nonlinearity").get<std::string>() == "logcosh"
                            ? IcaNonlinearity::logcosh
                            : IcaNonlinearity::cube;
    spec.ica_tol = j.at("ica_tol").get<double>();
    spec.ica_max_iter = j.at("ica_max_iter").get<int>();
    spec.lda_ridge = j.at("lda_ridge").get<double>();
    return spec;
}

}  // namespace

ModelContainer reducer_to_container(const ReducerModel& model) {
    ModelContainer container;
    container.method = to_string(model.spec.method);

    json meta;
    meta["kind"] = "reducer";
    meta["spec"] = spec_to_json(model.spec);
    meta["input_dim"] = model.input_dim;
    meta["kernel_centered"] = model.kernel_centered;
    meta["fit_scope"] = model.fit_scope;
    if (model.ica) {
        meta["ica_iterations"] = model.ica->iterations_used;
        meta["ica_converged"] = model.ica->converged;
    }
    if (model.lda) meta["lda_degenerate"] = model.lda->degenerate;
    container.metadata_json = meta.dump();

    container.sections.push_back(scalar_section("sigma_used", model.sigma_used));
    if (model.rff) {
        container.sections.push_back(matrix_section("rff.coefficients", model.rff->coefficients));
        container.sections.push_back(vector_section("rff.offsets", model.rff->offsets));
        container.sections.push_back(scalar_section("rff.sigma", model.rff->sigma));
        container.sections.push_back(
            index_section("rff.seed", {static_cast<std::int64_t>(model.rff->seed)}));
    }
    if (model.landmarks) {
        container.sections.push_back(matrix_section("landmarks.points", model.landmarks->points));
        container.sections.push_back(
            index_section("landmarks.source_indices", model.landmarks->source_indices));
        container.sections.push_back(vector_section("landmarks.gram_mean", model.landmarks->gram_mean));
        container.sections.push_back(
            scalar_section("landmarks.gram_total_mean", model.landmarks->gram_total_mean));
        container.sections.push_back(
            index_section("landmarks.seed", {static_cast<std::int64_t>(model.landmarks->seed)}));
        container.sections.push_back(scalar_section("kernel.gamma", model.kernel.gamma));
    }
    if (model.ica) {
        container.sections.push_back(vector_section("ica.mean", model.ica->whitening.mean));
        container.sections.push_back(
            matrix_section("ica.projection", model.ica->whitening.projection));
        container.sections.push_back(
            matrix_section("ica.back_projection", model.ica->whitening.back_projection));
        container.sections.push_back(matrix_section("ica.rotation", model.ica->rotation));
        container.sections.push_back(matrix_section("ica.unmixing", model.ica->unmixing));
    }
    if (model.lda) {
        container.sections.push_back(matrix_section("lda.projection", model.lda->projection));
        container.sections.push_back(vector_section("lda.eigenvalues", model.lda->eigenvalues));
        container.sections.push_back(scalar_section("lda.ridge_used", model.lda->ridge_used));
    }
    return container;
}

ReducerModel reducer_from_container(const ModelContainer& container) {
    json meta;
    try {
        meta = json::parse(container.metadata_json);
    } catch (const json::parse_error& e) {
        throw_format(std::string("model metadata is not valid JSON: ") + e.what());
    }
    if (meta.value("kind", "") != "reducer")
        throw_format("container does not hold a reducer model");

    ReducerModel model;
    model.spec = spec_from_json(meta.at("spec"));
    model.input_dim = meta.at("input_dim").get<int>();
    model.kernel_centered = meta.at("kernel_centered").get<bool>();
    model.fit_scope = meta.value("fit_scope", "");
    model.sigma_used = scalar_of(container, "sigma_used");

    if (container.has_section("rff.coefficients")) {
        RffMap map;
        map.coefficients = section_to_matrix(container.section("rff.coefficients"));
        map.offsets = section_to_vector(container.section("rff.offsets"));
        map.sigma = scalar_of(container, "rff.sigma");
        map.seed = static_cast<std::uint64_t>(container.section("rff.seed").i64.at(0));
        model.rff = std::move(map);
    }
    if (container.has_section("landmarks.points")) {
        LandmarkSet set;
        set.points = section_to_matrix(container.section("landmarks.points"));
        set.source_indices = container.section("landmarks.source_indices").i64;
        set.gram_mean = section_to_vector(container.section("landmarks.gram_mean"));
        set.gram_total_mean = scalar_of(container, "landmarks.gram_total_mean");
        set.seed = static_cast<std::uint64_t>(container.section("landmarks.seed").i64.at(0));
        model.landmarks = std::move(set);
        model.kernel.gamma = scalar_of(container, "kernel.gamma");
    }
    if (container.has_section("ica.unmixing")) {
        IcaModel ica;
        ica.whitening.mean = section_to_vector(container.section("ica.mean"));
        ica.whitening.projection = section_to_matrix(container.section("ica.projection"));
        ica.whitening.back_projection = section_to_matrix(container.section("ica.back_projection"));
        ica.whitening.retained = static_cast<int>(ica.whitening.projection.rows());
        ica.rotation = section_to_matrix(container.section("ica.rotation"));
        ica.unmixing = section_to_matrix(container.section("ica.unmixing"));
        ica.components = static_cast<int>(ica.rotation.rows());
        ica.nonlinearity = model.spec.nonlinearity;
        ica.iterations_used = meta.value("ica_iterations", 0);
        ica.converged = meta.value("ica_converged", false);
        model.ica = std::move(ica);
    }
    if (container.has_section("lda.projection")) {
        LdaModel lda;
        lda.projection = section_to_matrix(container.section("lda.projection"));
        lda.eigenvalues = section_to_vector(container.section("lda.eigenvalues"));
        lda.ridge_used = scalar_of(container, "lda.ridge_used");
        lda.degenerate = meta.value("lda_degenerate", false);
        model.lda = std::move(lda);
    }
    return model;
}

ModelContainer svm_to_container(const SvmMulticlassModel& model) {
    ModelContainer container;
    container.method = "svm";
    json meta;
    meta["kind"] = "svm";
    meta["num_classes"] = model.num_classes;
    meta["gamma"] = model.kernel.gamma;
    meta["pairs"] = model.models.size();
    json pair_meta = json::array();
    for (const auto& binary : model.models) {
        json p;
        p["class_a"] = binary.class_a;
        p["class_b"] = binary.class_b;
        p["converged"] = binary.converged;
        pair_meta.push_back(p);
    }
    meta["pair_info"] = pair_meta;
    container.metadata_json = meta.dump();

    for (std::size_t i = 0; i < model.models.size(); ++i) {
        const auto& binary = model.models[i];
        const std::string prefix = "pair" + std::to_string(i);
        container.sections.push_back(matrix_section(prefix + ".sv", binary.support_vectors));
        container.sections.push_back(vector_section(prefix + ".dual", binary.dual_coeffs));
        container.sections.push_back(index_section(prefix + ".sv_indices", binary.sv_indices));
        container.sections.push_back(scalar_section(prefix + ".bias", binary.bias));
    }
    return container;
}

SvmMulticlassModel svm_from_container(const ModelContainer& container) {
    json meta;
    try {
        meta = json::parse(container.metadata_json);
    } catch (const json::parse_error& e) {
        throw_format(std::string("model metadata is not valid JSON: ") + e.what());
    }
    if (meta.value("kind", "") != "svm") throw_format("container does not hold an svm model");

    SvmMulticlassModel model;
    model.num_classes = meta.at("num_classes").get<int>();
    model.kernel.gamma = meta.at("gamma").get<double>();
    const std::size_t pairs = meta.at("pairs").get<std::size_t>();
    const json& pair_meta = meta.at("pair_info");
    for (std::size_t i = 0; i < pairs; ++i) {
        const std::string prefix = "pair" + std::to_string(i);
        SvmBinaryModel binary;
        binary.support_vectors = section_to_matrix(container.section(prefix + ".sv"));
        binary.dual_coeffs = section_to_vector(container.section(prefix + ".dual"));
        binary.sv_indices = container.section(prefix + ".sv_indices").i64;
        binary.bias = scalar_of(container, prefix + ".bias");
        binary.kernel = model.kernel;
        binary.class_a = pair_meta.at(i).at("class_a").get<int>();
        binary.class_b = pair_meta.at(i).at("class_b").get<int>();
        binary.converged = pair_meta.at(i).at("converged").get<bool>();
        model.models.push_back(std::move(binary));
    }
    return model;
}

void save_reducer(const std::string& path, const ReducerModel& model) {
    save_container(path, reducer_to_container(model));
}

ReducerModel load_reducer(const std::string& path) {
    return reducer_from_container(load_container(path));
}

void save_svm(const std::string& path, const SvmMulticlassModel& model) {
    save_container(path, svm_to_container(model));
}

SvmMulticlassModel load_svm(const std::string& path) {
    return svm_from_container(load_container(path));
}

}  // namespace rffhsi
