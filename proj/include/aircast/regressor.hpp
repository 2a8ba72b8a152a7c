#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "aircast/ann.hpp"
#include "aircast/anfis.hpp"
#include "aircast/dataset.hpp"
#include "aircast/ga.hpp"
#include "aircast/mlr.hpp"
#include "aircast/rtree.hpp"
#include "aircast/svr.hpp"

namespace aircast {

/// A trained model of any family behind one predict-on-feature-vector
/// surface. Fitted models are immutable; copies share the underlying model.
struct Regressor {
    std::string name;
    std::function<double(const std::vector<double>&)> predict;
    std::string record;  // serialized text form

    std::vector<double> predict_all(const Dataset& ds) const {
        std::vector<double> out(ds.n_rows());
        for (std::size_t i = 0; i < ds.n_rows(); ++i) out[i] = predict(ds.row(i));
        return out;
    }
};

inline Regressor wrap(std::string name, MlrModel m) {
    auto shared = std::make_shared<MlrModel>(std::move(m));
    return {std::move(name),
            [shared](const std::vector<double>& x) { return predict_mlr(*shared, x); },
            serialize(*shared)};
}

inline Regressor wrap(std::string name, AnnModel m) {
    auto shared = std::make_shared<AnnModel>(std::move(m));
    return {std::move(name),
            [shared](const std::vector<double>& x) { return predict_ann(*shared, x); },
            serialize(*shared)};
}

inline Regressor wrap(std::string name, AnfisModel m) {
    auto shared = std::make_shared<AnfisModel>(std::move(m));
    return {std::move(name),
            [shared](const std::vector<double>& x) { return predict_anfis(*shared, x); },
            serialize(*shared)};
}

inline Regressor wrap(std::string name, GaModel m) {
    auto shared = std::make_shared<GaModel>(std::move(m));
    return {std::move(name),
            [shared](const std::vector<double>& x) { return predict_ga(*shared, x); },
            serialize(*shared)};
}

inline Regressor wrap(std::string name, SvrModel m) {
    auto shared = std::make_shared<SvrModel>(std::move(m));
    return {std::move(name),
            [shared](const std::vector<double>& x) { return predict_svr(*shared, x); },
            serialize(*shared)};
}

inline Regressor wrap(std::string name, TreeNode m) {
    auto shared = std::make_shared<TreeNode>(std::move(m));
    return {std::move(name),
            [shared](const std::vector<double>& x) { return predict_tree(*shared, x); },
            serialize(*shared)};
}

}  // namespace aircast
