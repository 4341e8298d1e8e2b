#ifndef RFFHSI_MODEL_IO_HPP
#define RFFHSI_MODEL_IO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rffhsi/classify.hpp"
#include "rffhsi/reducer.hpp"
#include "rffhsi/types.hpp"

namespace rffhsi {

// Versioned binary container for fitted models: magic + version, method tag,
// JSON metadata, named dense-array sections, CRC-32 trailer. All integers
// and floats little-endian; matrix payloads column-major. Byte layout is
// documented in docs/formats.md.
struct ArraySection {
    enum class DType : std::uint8_t { f64 = 0, i64 = 1 };
    std::string name;
    DType dtype = DType::f64;
    std::vector<std::uint64_t> shape;
    std::vector<double> f64;
    std::vector<std::int64_t> i64;

    std::uint64_t element_count() const;
};

struct ModelContainer {
    std::string method;
    std::string metadata_json;  // canonical (sorted-key) JSON text
    std::vector<ArraySection> sections;

    const ArraySection& section(const std::string& name) const;
    bool has_section(const std::string& name) const;
};

void save_container(const std::string& path, const ModelContainer& container);
ModelContainer load_container(const std::string& path);

ModelContainer reducer_to_container(const ReducerModel& model);
ReducerModel reducer_from_container(const ModelContainer& container);

ModelContainer svm_to_container(const SvmMulticlassModel& model);
SvmMulticlassModel svm_from_container(const ModelContainer& container);

void save_reducer(const std::string& path, const ReducerModel& model);
ReducerModel load_reducer(const std::string& path);

void save_svm(const std::string& path, const SvmMulticlassModel& model);
SvmMulticlassModel load_svm(const std::string& path);

// Section helpers shared with tests.
ArraySection matrix_section(const std::string& name, const Matrix& m);
Matrix section_to_matrix(const ArraySection& s);
ArraySection vector_section(const std::string& name, const Vector& v);
Vector section_to_vector(const ArraySection& s);

std::uint32_t crc32(const unsigned char* data, std::size_t length, std::uint32_t seed = 0);

}  // namespace rffhsi

#endif
