#!/usr/bin/env python3
"""Generates the shipped stub files in data/stubs/ from the installed
libraries, so that declared fqns agree with what the tracing oracle records.

The API surface is declared below; `inspect` supplies the defining module of
each public symbol. Regenerate with:

    python3 tests/oracle/gen_stubs.py data/stubs
"""

import importlib
import inspect
import json
import os
import sys

os.environ.setdefault("MPLBACKEND", "Agg")


def defining_fqn(public_path):
    """Resolves a dotted public path to the live object and its defining fqn."""
    parts = public_path.split(".")
    obj = importlib.import_module(parts[0])
    for part in parts[1:]:
        obj = getattr(obj, part)
    module = getattr(obj, "__module__", None)
    qualname = getattr(obj, "__qualname__", getattr(obj, "__name__", parts[-1]))
    qualname = qualname.replace(".<locals>.", ".")
    if inspect.ismethod(obj) and getattr(obj, "__self__", None) is not None:
        cls = type(obj.__self__)
        return f"{cls.__module__}.{cls.__qualname__}.{obj.__name__}"
    if module is None or module == "builtins":
        return f"builtins.{qualname}" if not qualname.startswith("builtins.") else qualname
    return f"{module}.{qualname}"


class Package:
    def __init__(self, name):
        self.name = name
        self.exports = {}
        self.functions = {}
        self.classes = {}

    def export(self, public_path, target):
        if public_path != target:
            self.exports[public_path] = target

    def function(self, public_path, returns, fqn=None):
        fqn = fqn or defining_fqn(public_path)
        self.export(public_path, fqn)
        self.functions[fqn] = {"returns": sorted(set(returns))}
        return fqn

    def cls(self, public_path, attributes=None, methods=None, fqn=None):
        fqn = fqn or defining_fqn(public_path)
        self.export(public_path, fqn)
        entry = self.classes.setdefault(fqn, {"attributes": {}, "methods": {}})
        for name, type_fqn in (attributes or {}).items():
            entry["attributes"][name] = type_fqn
        for name, returns in (methods or {}).items():
            entry["methods"][name] = {"returns": sorted(set(returns))}
        return fqn

    def method_export(self, public_path, cls_fqn, method):
        self.exports[public_path] = f"{cls_fqn}.{method}"

    def to_json(self):
        doc = {"package": self.name}
        if self.exports:
            doc["exports"] = dict(sorted(self.exports.items()))
        if self.functions:
            doc["functions"] = dict(sorted(self.functions.items()))
        if self.classes:
            doc["classes"] = {
                fqn: {
                    "attributes": dict(sorted(entry["attributes"].items())),
                    "methods": dict(sorted(entry["methods"].items())),
                }
                for fqn, entry in sorted(self.classes.items())
            }
        return doc


NONE = "builtins.NoneType"
DF = "pandas.core.frame.DataFrame"
SERIES = "pandas.core.series.Series"
NDARRAY = "numpy.ndarray"
INT = "builtins.int"
FLOAT = "builtins.float"
STR = "builtins.str"
LIST = "builtins.list"
DICT = "builtins.dict"
TUPLE = "builtins.tuple"
AXES = "matplotlib.axes._axes.Axes"


def build_builtins():
    p = Package("builtins")
    p.cls("builtins.str", fqn=STR, methods={
        "format": [STR], "join": [STR], "split": [LIST], "strip": [STR],
        "upper": [STR], "lower": [STR], "replace": [STR], "startswith": ["builtins.bool"],
        "endswith": ["builtins.bool"], "title": [STR], "zfill": [STR],
    })
    p.cls("builtins.int", fqn=INT, methods={})
    p.cls("builtins.float", fqn=FLOAT, methods={})
    p.cls("builtins.bool", fqn="builtins.bool", methods={})
    p.cls("builtins.list", fqn=LIST, methods={
        "append": [NONE], "extend": [NONE], "insert": [NONE], "pop": [NONE],
        "sort": [NONE], "reverse": [NONE], "count": [INT], "index": [INT],
        "copy": [LIST],
    })
    p.cls("builtins.dict", fqn=DICT, methods={
        "keys": [LIST], "values": [LIST], "items": [LIST], "get": [NONE],
        "update": [NONE], "pop": [NONE], "copy": [DICT],
    })
    p.cls("builtins.set", fqn="builtins.set", methods={
        "add": [NONE], "update": [NONE], "discard": [NONE], "copy": ["builtins.set"],
    })
    p.cls("builtins.tuple", fqn=TUPLE, methods={"count": [INT], "index": [INT]})
    p.cls("builtins.range", fqn="builtins.range", methods={})
    p.cls("builtins.enumerate", fqn="builtins.enumerate", methods={})
    p.cls("builtins.zip", fqn="builtins.zip", methods={})
    p.cls("builtins.NoneType", fqn=NONE, methods={})
    p.cls("builtins.object", fqn="builtins.object", methods={})
    p.cls("builtins.Exception", fqn="builtins.Exception", methods={})
    p.cls("builtins.ValueError", fqn="builtins.ValueError", methods={})
    p.cls("builtins.KeyError", fqn="builtins.KeyError", methods={})
    io_wrapper = defining_fqn("io.TextIOWrapper")
    p.cls("io.TextIOWrapper", fqn=io_wrapper, methods={
        "read": [STR], "readlines": [LIST], "write": [INT], "close": [NONE],
    })
    p.function("builtins.open", [io_wrapper], fqn=defining_fqn("builtins.open"))
    if defining_fqn("builtins.open") != "builtins.open":
        p.exports["builtins.open"] = defining_fqn("builtins.open")
    p.functions["builtins.print"] = {"returns": [NONE]}
    p.functions["builtins.len"] = {"returns": [INT]}
    p.functions["builtins.sorted"] = {"returns": [LIST]}
    p.functions["builtins.sum"] = {"returns": sorted({INT, FLOAT})}
    p.functions["builtins.min"] = {"returns": sorted({INT, FLOAT})}
    p.functions["builtins.max"] = {"returns": sorted({INT, FLOAT})}
    p.functions["builtins.abs"] = {"returns": sorted({INT, FLOAT})}
    p.functions["builtins.round"] = {"returns": sorted({INT, FLOAT})}
    p.functions["builtins.repr"] = {"returns": [STR]}
    p.functions["builtins.isinstance"] = {"returns": ["builtins.bool"]}
    p.functions["builtins.getattr"] = {"returns": [NONE]}
    p.functions["builtins.input"] = {"returns": [STR]}
    return p


def build_numpy():
    p = Package("numpy")
    p.cls("numpy.ndarray", fqn=NDARRAY, attributes={
        "shape": TUPLE, "dtype": "numpy.dtype", "T": NDARRAY, "size": INT, "ndim": INT,
    }, methods={
        "astype": [NDARRAY], "reshape": [NDARRAY], "copy": [NDARRAY],
        "flatten": [NDARRAY], "tolist": [LIST], "mean": ["numpy.float64"],
        "sum": ["numpy.float64"], "min": ["numpy.float64"], "max": ["numpy.float64"],
        "std": ["numpy.float64"], "argmax": ["numpy.int64"], "argmin": ["numpy.int64"],
        "round": [NDARRAY], "transpose": [NDARRAY], "clip": [NDARRAY],
        "__getitem_scalar__": [NDARRAY, "numpy.float64"],
        "__getitem_list__": [NDARRAY],
        "__getitem_slice__": [NDARRAY],
        "__getitem_mask__": [NDARRAY],
    })
    p.cls("numpy.float64", methods={})
    p.cls("numpy.int64", methods={})
    p.cls("numpy.dtype", methods={})
    for name in ["array", "asarray", "zeros", "ones", "arange", "linspace", "reshape",
                 "concatenate", "vstack", "hstack", "where", "unique", "argsort", "log1p",
                 "expm1"]:
        p.function(f"numpy.{name}", [NDARRAY])
    for name in ["mean", "sum", "sqrt", "exp", "log", "abs", "round", "std", "median"]:
        p.function(f"numpy.{name}", [NDARRAY, "numpy.float64"])
    p.function("numpy.argmax", ["numpy.int64"])
    # numpy.random.* dispatches through a module-level RandomState instance
    rs = defining_fqn("numpy.random.RandomState")
    p.cls("numpy.random.RandomState", fqn=rs, methods={
        "rand": [NDARRAY], "randn": [NDARRAY], "randint": [NDARRAY],
        "choice": [NDARRAY], "seed": [NONE], "shuffle": [NONE], "permutation": [NDARRAY],
        "uniform": [NDARRAY], "normal": [NDARRAY],
    })
    for name in ["rand", "randn", "randint", "choice", "seed", "shuffle", "permutation",
                 "uniform", "normal"]:
        p.method_export(f"numpy.random.{name}", rs, name)
    return p


def build_pandas():
    p = Package("pandas")
    iloc = defining_fqn("pandas.core.indexing._iLocIndexer")
    loc = defining_fqn("pandas.core.indexing._LocIndexer")
    index = defining_fqn("pandas.core.indexes.base.Index")
    strmeth = defining_fqn("pandas.core.strings.accessor.StringMethods")
    dfgroup = defining_fqn("pandas.core.groupby.generic.DataFrameGroupBy")
    sgroup = defining_fqn("pandas.core.groupby.generic.SeriesGroupBy")

    p.cls("pandas.DataFrame", fqn=DF, attributes={
        "values": NDARRAY, "columns": index, "index": index, "shape": TUPLE,
        "iloc": iloc, "loc": loc, "T": DF, "dtypes": SERIES, "__getattr__": SERIES,
    }, methods={
        "head": [DF], "tail": [DF], "copy": [DF], "describe": [DF], "info": [NONE],
        "drop": [DF], "dropna": [DF], "fillna": [DF], "isnull": [DF], "isna": [DF],
        "sum": [SERIES], "mean": [SERIES], "corr": [DF], "groupby": [dfgroup],
        "merge": [DF], "join": [DF], "rename": [DF], "reset_index": [DF],
        "set_index": [DF], "sort_values": [DF], "astype": [DF],
        "apply": [DF, SERIES], "to_csv": [NONE, STR], "to_numpy": [NDARRAY],
        "sample": [DF], "nunique": [SERIES], "value_counts": [SERIES],
        "pivot_table": [DF], "select_dtypes": [DF], "count": [SERIES],
        "__getitem_scalar__": [SERIES], "__getitem_list__": [DF],
        "__getitem_slice__": [DF], "__getitem_mask__": [DF],
    })
    p.cls("pandas.Series", fqn=SERIES, attributes={
        "values": NDARRAY, "index": index, "dtype": "numpy.dtype", "str": strmeth,
        "iloc": iloc, "loc": loc, "shape": TUPLE,
    }, methods={
        "map": [SERIES], "fillna": [SERIES], "isnull": [SERIES], "isna": [SERIES],
        "astype": [SERIES], "apply": [SERIES], "value_counts": [SERIES],
        "unique": [NDARRAY], "tolist": [LIST], "head": [SERIES], "copy": [SERIES],
        "replace": [SERIES], "dropna": [SERIES], "sum": [FLOAT], "mean": [FLOAT],
        "min": [FLOAT], "max": [FLOAT], "count": [INT], "nunique": [INT],
        "sort_values": [SERIES], "reset_index": [DF, SERIES], "to_numpy": [NDARRAY],
        "mode": [SERIES], "median": [FLOAT],
        "__getitem_scalar__": [FLOAT, SERIES], "__getitem_list__": [SERIES],
        "__getitem_slice__": [SERIES], "__getitem_mask__": [SERIES],
    })
    p.cls("pandas.core.groupby.generic.DataFrameGroupBy", fqn=dfgroup, methods={
        "agg": [DF], "aggregate": [DF], "mean": [DF], "sum": [DF], "count": [DF],
        "size": [SERIES], "apply": [DF, SERIES], "first": [DF], "max": [DF], "min": [DF],
        "__getitem_scalar__": [sgroup], "__getitem_list__": [dfgroup],
    })
    p.cls("pandas.core.groupby.generic.SeriesGroupBy", fqn=sgroup, methods={
        "agg": [SERIES], "aggregate": [SERIES], "mean": [SERIES], "sum": [SERIES],
        "count": [SERIES], "apply": [SERIES], "transform": [SERIES],
    })
    p.cls("pandas.core.indexing._iLocIndexer", fqn=iloc, methods={
        "__getitem_scalar__": [SERIES], "__getitem_list__": [DF],
        "__getitem_slice__": [DF], "__getitem_mask__": [DF], "__getitem__": [DF, SERIES],
    })
    p.cls("pandas.core.indexing._LocIndexer", fqn=loc, methods={
        "__getitem_scalar__": [SERIES], "__getitem_list__": [DF],
        "__getitem_slice__": [DF], "__getitem_mask__": [DF], "__getitem__": [DF, SERIES],
    })
    p.cls("pandas.core.indexes.base.Index", fqn=index, methods={"tolist": [LIST]})
    p.cls("pandas.core.strings.accessor.StringMethods", fqn=strmeth, methods={
        "contains": [SERIES], "replace": [SERIES], "split": [SERIES],
        "lower": [SERIES], "upper": [SERIES], "strip": [SERIES], "extract": [DF],
    })
    p.function("pandas.read_csv", [DF])
    p.function("pandas.concat", [DF])
    p.function("pandas.get_dummies", [DF])
    p.function("pandas.to_datetime", [SERIES])
    p.function("pandas.to_numeric", [SERIES])
    p.function("pandas.crosstab", [DF])
    p.export("pandas.DataFrame", DF)
    p.export("pandas.Series", SERIES)
    return p


def build_seaborn():
    p = Package("seaborn")
    p.function("seaborn.load_dataset", [DF])
    for name in ["scatterplot", "lineplot", "barplot", "countplot", "boxplot",
                 "heatmap", "histplot", "violinplot", "regplot"]:
        p.function(f"seaborn.{name}", [AXES])
    p.function("seaborn.pairplot", [defining_fqn("seaborn.axisgrid.PairGrid")])
    p.cls("seaborn.axisgrid.PairGrid", methods={})
    p.function("seaborn.set_style", [NONE])
    return p


def build_matplotlib():
    p = Package("matplotlib")
    figure = defining_fqn("matplotlib.figure.Figure")
    p.cls("matplotlib.figure.Figure", fqn=figure, methods={
        "add_subplot": [AXES], "savefig": [NONE], "tight_layout": [NONE],
    })
    p.cls("matplotlib.axes._axes.Axes", fqn=AXES, methods={
        "plot": [LIST], "scatter": [NONE], "set_title": [NONE], "set_xlabel": [NONE],
        "set_ylabel": [NONE], "legend": [NONE], "hist": [TUPLE], "bar": [NONE],
    })
    for name, returns in [
        ("plot", [LIST]), ("show", [NONE]), ("figure", [figure]), ("subplots", [TUPLE]),
        ("xlabel", [NONE]), ("ylabel", [NONE]), ("title", [NONE]), ("legend", [NONE]),
        ("hist", [TUPLE]), ("scatter", [NONE]), ("imshow", [NONE]), ("bar", [NONE]),
        ("xticks", [TUPLE]), ("yticks", [TUPLE]), ("grid", [NONE]), ("savefig", [NONE]),
        ("tight_layout", [NONE]), ("subplot", [AXES]), ("pie", [TUPLE]),
        ("boxplot", [DICT]), ("close", [NONE]),
    ]:
        fqn = f"matplotlib.pyplot.{name}"
        p.functions[fqn] = {"returns": sorted(set(returns))}
    return p


def build_sklearn():
    p = Package("sklearn")
    p.function("sklearn.model_selection.train_test_split", [LIST])
    lrcv = p.cls("sklearn.linear_model.LogisticRegressionCV", methods={})
    p.classes[lrcv]["methods"] = {
        "fit": {"returns": [lrcv]}, "predict": {"returns": [NDARRAY]},
        "score": {"returns": [FLOAT]}, "predict_proba": {"returns": [NDARRAY]},
    }
    for cls_path, extra in [
        ("sklearn.linear_model.LogisticRegression", {}),
        ("sklearn.linear_model.LinearRegression", {}),
        ("sklearn.ensemble.RandomForestClassifier", {}),
        ("sklearn.tree.DecisionTreeClassifier", {}),
        ("sklearn.neighbors.KNeighborsClassifier", {}),
    ]:
        fqn = p.cls(cls_path, methods={})
        p.classes[fqn]["methods"] = {
            "fit": {"returns": [fqn]}, "predict": {"returns": [NDARRAY]},
            "score": {"returns": [FLOAT]}, "predict_proba": {"returns": [NDARRAY]},
        }
    for cls_path in ["sklearn.preprocessing.StandardScaler",
                     "sklearn.preprocessing.MinMaxScaler",
                     "sklearn.preprocessing.LabelEncoder"]:
        fqn = p.cls(cls_path, methods={})
        p.classes[fqn]["methods"] = {
            "fit": {"returns": [fqn]}, "transform": {"returns": [NDARRAY]},
            "fit_transform": {"returns": [NDARRAY]},
            "inverse_transform": {"returns": [NDARRAY]},
        }
    gs = p.cls("sklearn.model_selection.GridSearchCV", methods={})
    p.classes[gs]["methods"] = {"fit": {"returns": [gs]}, "predict": {"returns": [NDARRAY]}}
    p.function("sklearn.metrics.accuracy_score", [FLOAT])
    p.function("sklearn.metrics.confusion_matrix", [NDARRAY])
    p.function("sklearn.metrics.classification_report", [STR])
    p.function("sklearn.metrics.mean_squared_error", [FLOAT])
    return p


def build_keras():
    p = Package("keras")
    history = defining_fqn("keras.callbacks.History")
    p.cls("keras.callbacks.History", fqn=history, attributes={"history": DICT}, methods={})
    seq = defining_fqn("keras.models.Sequential")
    p.cls("keras.models.Sequential", fqn=seq, methods={
        "add": [NONE], "compile": [NONE], "fit": [history], "predict": [NDARRAY],
        "evaluate": [LIST], "summary": [NONE],
    })
    p.export("keras.Sequential", seq)
    for layer in ["Dense", "Dropout", "LSTM", "Flatten", "Conv2D", "MaxPooling2D",
                  "Embedding", "BatchNormalization", "Activation"]:
        p.cls(f"keras.layers.{layer}", methods={})
    p.function("keras.utils.to_categorical", [NDARRAY])
    return p


def main():
    out_dir = sys.argv[1] if len(sys.argv) > 1 else "data/stubs"
    os.makedirs(out_dir, exist_ok=True)
    builders = {
        "builtins": build_builtins,
        "numpy": build_numpy,
        "pandas": build_pandas,
        "seaborn": build_seaborn,
        "matplotlib": build_matplotlib,
        "sklearn": build_sklearn,
        "keras": build_keras,
    }
    for name, build in builders.items():
        try:
            pkg = build()
        except Exception as exc:  # noqa: BLE001 - report and continue
            print(f"skipping {name}: {type(exc).__name__}: {exc}", file=sys.stderr)
            continue
        path = os.path.join(out_dir, f"{name}.stub.json")
        with open(path, "w") as fh:
            json.dump(pkg.to_json(), fh, indent=2, sort_keys=False)
            fh.write("\n")
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
