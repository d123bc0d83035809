import numpy as np
import pytest

from app.exceptions import InvalidBreakDateError, InvalidDetSpecError
from app.models.deterministics.det_spec_model import DetSpec
from app.models.enum.det_kind import DetKind
from app.services.deterministics_service import deterministics_service
from app.services.regression_service import regression_service


class TestParse:
    @pytest.mark.parametrize("text, kind, order, labels", [
        ("none", DetKind.NONE, 0, []),
        ("c", DetKind.POLYNOMIAL, 0, ["const"]),
        ("ct", DetKind.POLYNOMIAL, 1, ["const", "t"]),
        ("poly:2", DetKind.POLYNOMIAL, 2, ["const", "t", "t^2"]),
        ("break:120", DetKind.BREAK, 0, ["const", "DU"]),
        ("break:120:trend", DetKind.BREAK, 1, ["const", "t", "DU", "DT"]),
        ("break:40:order=1", DetKind.BREAK, 1, ["const", "t", "DU"]),
    ])
    def test_canonical_strings(self, text, kind, order, labels):
        spec = DetSpec.parse(text)

        assert spec.kind == kind
        assert spec.order == order
        assert spec.labels == labels
        assert DetSpec.parse(spec.to_string()).labels == labels

    @pytest.mark.parametrize("text", ["quadratic", "poly:x", "break:", "break:10:slope", "break:0"])
    def test_bad_strings(self, text):
        with pytest.raises(InvalidDetSpecError):
            DetSpec.parse(text)

    def test_custom_file(self, tmp_path):
        path = tmp_path / "x.csv"
        path.write_text("w\n" + "\n".join(str(float(i % 3)) for i in range(1, 13)) + "\n")

        spec = DetSpec.parse(f"custom:{path}")

        assert spec.kind == DetKind.CUSTOM
        assert spec.labels == ["w"]
        assert spec.to_string() == f"custom:{path}"
        np.testing.assert_array_equal(deterministics_service.build(spec, 1, 4).values[:, 0], [1.0, 2.0, 0.0, 1.0])

    def test_custom_file_with_bad_cell_names_row_and_column(self, tmp_path):
        path = tmp_path / "x.csv"
        path.write_text("w,v\n1,2\n3,oops\n")

        with pytest.raises(InvalidDetSpecError, match="row 2, column 'v'"):
            DetSpec.parse(f"custom:{path}")


class TestBuild:
    def test_linear_trend(self):
        X = deterministics_service.build(DetSpec.polynomial(1), 1, 3)
        np.testing.assert_array_equal(X.values, [[1, 1], [1, 2], [1, 3]])

    def test_intercept_only(self):
        X = deterministics_service.build(DetSpec.polynomial(0), 1, 4)
        np.testing.assert_array_equal(X.values, np.ones((4, 1)))

    def test_level_break(self):
        X = deterministics_service.build(DetSpec.with_break(0, 2), 1, 4)

        np.testing.assert_array_equal(X.column("const"), [1, 1, 1, 1])
        np.testing.assert_array_equal(X.column("DU"), [0, 0, 1, 1])

    def test_trend_break(self):
        X = deterministics_service.build(DetSpec.with_break(1, 3, with_trend_break=True), 1, 6)
        np.testing.assert_array_equal(X.column("DT"), [0, 0, 0, 1, 2, 3])

    def test_empty_spec(self):
        X = deterministics_service.build(DetSpec.none(), 1, 5)
        assert (X.n, X.m) == (5, 0)

    @pytest.mark.parametrize("break_date", [10, 15])
    def test_break_outside_sample(self, break_date):
        with pytest.raises(InvalidBreakDateError):
            deterministics_service.build(DetSpec.with_break(0, break_date), 1, 10)

    def test_custom_functions(self):
        spec = DetSpec.custom(["log_t"], [np.log])
        X = deterministics_service.build(spec, 1, 3)
        np.testing.assert_allclose(X.values[:, 0], np.log([1, 2, 3]))

    def test_custom_matrix_too_short(self):
        spec = DetSpec.from_matrix(["w"], np.ones(5))
        with pytest.raises(InvalidDetSpecError):
            deterministics_service.build(spec, 1, 6)

    @pytest.mark.parametrize("order", [0, 1, 2])
    @pytest.mark.parametrize("shift", [1, 5])
    def test_shifted_polynomial_spans_the_same_space(self, order, shift):
        y = np.random.default_rng(order + 10 * shift).standard_normal(60)
        spec = DetSpec.polynomial(order)

        base = regression_service.ols_fit(y, deterministics_service.build(spec, 1, 60))
        shifted = regression_service.ols_fit(y, deterministics_service.build(spec, 1 + shift, 60 + shift))

        np.testing.assert_allclose(shifted.fitted, base.fitted, rtol=0, atol=1e-10)


class TestLaggedExpansion:
    def test_trend_spans_itself(self):
        X = deterministics_service.lagged_expansion(DetSpec.polynomial(1), 2, 3, 10)

        raw = np.column_stack([
            deterministics_service.evaluate(DetSpec.polynomial(1), np.arange(3, 11) - lag) for lag in range(3)
        ])
        assert np.linalg.matrix_rank(raw) == 2
        assert X.column_labels == ["const", "t"]

    @pytest.mark.parametrize("order", [0, 1, 2])
    @pytest.mark.parametrize("p", [1, 2, 5])
    def test_polynomial_rank_is_order_plus_one(self, order, p):
        X = deterministics_service.lagged_expansion(DetSpec.polynomial(order), p, p + 1, 60)
        assert X.m == order + 1

    def test_break_dummy_keeps_its_lag(self):
        X = deterministics_service.lagged_expansion(DetSpec.with_break(0, 5), 1, 2, 10)

        assert X.m == 3
        assert X.column_labels == ["const", "DU", "DU_L1"]
        assert np.linalg.matrix_rank(X.values) == 3

    def test_empty_spec(self):
        X = deterministics_service.lagged_expansion(DetSpec.none(), 3, 4, 20)
        assert X.m == 0
