#include "qrem/noise_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <set>

#include <json.hpp>

namespace qrem {

using nlohmann::json;

namespace {

int block_dim(const LocalCalibration& b) {
    return 1 << static_cast<int>(b.qubits.size());
}

// Sub-index of full-space index `idx` for one block; qubit 0 is the most
// significant bit of the full index (leftmost character convention).
int sub_index_of(std::size_t idx, int width, const std::vector<int>& qubits) {
    int s = 0;
    for (int q : qubits) {
        s = (s << 1) | static_cast<int>((idx >> (width - 1 - q)) & 1u);
    }
    return s;
}

}  // namespace

int sub_index(const std::string& bits, const std::vector<int>& qubits) {
    int s = 0;
    for (int q : qubits) {
        s = (s << 1) | (bits[static_cast<std::size_t>(q)] == '1' ? 1 : 0);
    }
    return s;
}

void validate_model(const TensorNoiseModel& model) {
    if (model.width < 1) {
        throw InputError("noise model width must be >= 1");
    }
    std::set<int> seen;
    for (const auto& b : model.blocks) {
        if (b.qubits.empty() || static_cast<int>(b.qubits.size()) > kMaxBlockSize) {
            throw InputError("block size must be between 1 and " +
                             std::to_string(kMaxBlockSize));
        }
        if (!std::is_sorted(b.qubits.begin(), b.qubits.end())) {
            throw InputError("block qubits must be ascending");
        }
        for (int q : b.qubits) {
            if (q < 0 || q >= model.width) {
                throw InputError("block qubit index out of range");
            }
            if (!seen.insert(q).second) {
                throw InputError("block qubit sets overlap");
            }
        }
        const int dim = block_dim(b);
        if (b.matrix.rows() != dim || b.matrix.cols() != dim) {
            throw InputError("block matrix size does not match block qubit count");
        }
        for (int j = 0; j < dim; ++j) {
            double col = 0.0;
            for (int i = 0; i < dim; ++i) {
                const double v = b.matrix(i, j);
                if (!(v >= -1e-12 && v <= 1.0 + 1e-12)) {
                    throw InputError("calibration entries must lie in [0, 1]");
                }
                col += v;
            }
            if (std::abs(col - 1.0) > 1e-9) {
                throw InputError("calibration column does not sum to 1");
            }
        }
        if (std::abs(b.matrix.determinant()) <= 1e-12) {
            throw DegenerateError("calibration block is not invertible");
        }
    }
    if (static_cast<int>(seen.size()) != model.width) {
        throw InputError("block qubit sets must cover every qubit exactly once");
    }
}

TensorNoiseModel synth_uniform(int n, double p01, double p10) {
    if (n < 1) {
        throw InputError("synth_uniform: n must be >= 1");
    }
    if (!(p01 >= 0.0 && p01 < 0.5) || !(p10 >= 0.0 && p10 < 0.5)) {
        throw InputError("synth_uniform: flip probabilities must lie in [0, 0.5)");
    }
    TensorNoiseModel model;
    model.width = n;
    Eigen::MatrixXd m(2, 2);
    m << 1.0 - p10, p01, p10, 1.0 - p01;
    for (int q = 0; q < n; ++q) {
        model.blocks.push_back({{q}, m});
    }
    return model;
}

Eigen::MatrixXd full_matrix(const TensorNoiseModel& model, int cap) {
    validate_model(model);
    if (model.width > cap) {
        throw CapError("full_matrix: width " + std::to_string(model.width) +
                       " exceeds cap " + std::to_string(cap));
    }
    const std::size_t dim = std::size_t{1} << model.width;
    const std::size_t nb = model.blocks.size();
    // Sub-index tables keep the inner product loop free of bit gathering.
    std::vector<std::vector<int>> sub(nb, std::vector<int>(dim));
    for (std::size_t b = 0; b < nb; ++b) {
        for (std::size_t i = 0; i < dim; ++i) {
            sub[b][i] = sub_index_of(i, model.width, model.blocks[b].qubits);
        }
    }
    Eigen::MatrixXd a(dim, dim);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(dim); ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            double p = 1.0;
            for (std::size_t b = 0; b < nb; ++b) {
                p *= model.blocks[b].matrix(sub[b][static_cast<std::size_t>(i)], sub[b][j]);
            }
            a(i, j) = p;
        }
    }
    return a;
}

std::vector<Eigen::MatrixXd> block_inverses(const TensorNoiseModel& model) {
    std::vector<Eigen::MatrixXd> out;
    out.reserve(model.blocks.size());
    for (const auto& b : model.blocks) {
        const int dim = block_dim(b);
        if (dim == 2) {
            const double det = b.matrix(0, 0) * b.matrix(1, 1) - b.matrix(0, 1) * b.matrix(1, 0);
            if (std::abs(det) <= 1e-12) {
                throw DegenerateError("calibration block is not invertible");
            }
            Eigen::MatrixXd inv(2, 2);
            inv << b.matrix(1, 1) / det, -b.matrix(0, 1) / det,
                   -b.matrix(1, 0) / det, b.matrix(0, 0) / det;
            out.push_back(inv);
        } else {
            Eigen::PartialPivLU<Eigen::MatrixXd> lu(b.matrix);
            if (std::abs(lu.determinant()) <= 1e-12) {
                throw DegenerateError("calibration block is not invertible");
            }
            out.push_back(lu.inverse());
        }
    }
    return out;
}

double full_inverse_one_norm(const TensorNoiseModel& model) {
    double norm = 1.0;
    for (const auto& inv : block_inverses(model)) {
        norm *= inv.cwiseAbs().colwise().sum().maxCoeff();
    }
    return norm;
}

SvdCache svd_cache(const TensorNoiseModel& model) {
    validate_model(model);
    SvdCache cache;
    cache.width = model.width;
    for (const auto& b : model.blocks) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(b.matrix,
                                              Eigen::ComputeFullU | Eigen::ComputeFullV);
        BlockSvd bs;
        bs.sigma = svd.singularValues();
        bs.u = svd.matrixU();
        bs.v = svd.matrixV();
        if (bs.sigma.minCoeff() <= 1e-12) {
            throw DegenerateError("calibration block is singular");
        }
        // Fixed sign convention: element sum of each right singular vector is
        // non-negative; sum-zero vectors keep their first nonzero entry positive.
        for (int i = 0; i < bs.v.cols(); ++i) {
            double s = bs.v.col(i).sum();
            bool flip = false;
            if (s < -1e-12) {
                flip = true;
            } else if (std::abs(s) <= 1e-12) {
                for (int r = 0; r < bs.v.rows(); ++r) {
                    const double e = bs.v(r, i);
                    if (std::abs(e) > 1e-12) {
                        flip = e < 0.0;
                        break;
                    }
                }
            }
            if (flip) {
                bs.v.col(i) = -bs.v.col(i);
                bs.u.col(i) = -bs.u.col(i);
            }
        }
        bs.v_col_sums = bs.v.colwise().sum();
        cache.qubits.push_back(b.qubits);
        cache.blocks.push_back(std::move(bs));
    }
    return cache;
}

std::string model_to_json_string(const TensorNoiseModel& model, int indent) {
    json j;
    j["width"] = model.width;
    j["blocks"] = json::array();
    for (const auto& b : model.blocks) {
        json jb;
        jb["qubits"] = b.qubits;
        json rows = json::array();
        for (int r = 0; r < b.matrix.rows(); ++r) {
            json row = json::array();
            for (int c = 0; c < b.matrix.cols(); ++c) {
                row.push_back(b.matrix(r, c));
            }
            rows.push_back(row);
        }
        jb["matrix"] = rows;
        j["blocks"].push_back(jb);
    }
    return j.dump(indent);
}

TensorNoiseModel model_from_json_string(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw InputError(std::string("calibration JSON parse error: ") + e.what());
    }
    TensorNoiseModel model;
    if (!j.contains("width") || !j.contains("blocks")) {
        throw InputError("calibration JSON needs 'width' and 'blocks'");
    }
    model.width = j.at("width").get<int>();
    for (const auto& jb : j.at("blocks")) {
        LocalCalibration b;
        b.qubits = jb.at("qubits").get<std::vector<int>>();
        const auto rows = jb.at("matrix");
        const int dim = static_cast<int>(rows.size());
        b.matrix.resize(dim, dim);
        for (int r = 0; r < dim; ++r) {
            if (static_cast<int>(rows[r].size()) != dim) {
                throw InputError("calibration matrix is not square");
            }
            for (int c = 0; c < dim; ++c) {
                b.matrix(r, c) = rows[r][c].get<double>();
            }
        }
        // Measured calibrations may carry statistical drift; renormalize columns.
        for (int c = 0; c < dim; ++c) {
            const double col = b.matrix.col(c).sum();
            if (std::abs(col - 1.0) > 1e-6) {
                std::cerr << "warning: calibration column sum " << col
                          << " deviates from 1; renormalizing\n";
            }
            if (col <= 0.0) {
                throw InputError("calibration column sum must be positive");
            }
            b.matrix.col(c) /= col;
        }
        model.blocks.push_back(std::move(b));
    }
    validate_model(model);
    return model;
}

TensorNoiseModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open calibration file: " + path);
    }
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return model_from_json_string(text);
}

void save_model(const TensorNoiseModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw InputError("cannot write calibration file: " + path);
    }
    out << model_to_json_string(model) << "\n";
}

}  // namespace qrem
