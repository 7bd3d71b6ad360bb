import numpy as np
from django.test import SimpleTestCase

from tsf.exceptions import ContractError, DimensionError, ModelFileError
from tsf.numerics import functional as F
from tsf.numerics.modules import Conv1d, LayerNorm, Linear, Parameter
from tsf.numerics.optim import Adam, adam_step
from tsf.numerics.tensor import Tensor, backward, no_grad

from .helpers import GradientCheckMixin, smooth_numeric_gradient


class TensorTests(GradientCheckMixin, SimpleTestCase):
    def setUp(self):
        self.rng = np.random.default_rng(0)

    def test_broadcast_add_and_mul_gradients(self):
        a = Tensor(self.rng.standard_normal((3, 4)), requires_grad=True)
        b = Tensor(self.rng.standard_normal((4,)), requires_grad=True)
        self.assertGradientsMatch(lambda: ((a + b) * b * a).sum(), [a, b])

    def test_division_power_and_elementwise_gradients(self):
        a = Tensor(self.rng.uniform(0.5, 2.0, (2, 3)), requires_grad=True)
        b = Tensor(self.rng.uniform(0.5, 2.0, (2, 3)), requires_grad=True)
        self.assertGradientsMatch(lambda: (a / b + a ** 1.5 + b.exp().log() * a.tanh()).mean(), [a, b])

    def test_batched_matmul_with_shared_right_operand(self):
        a = Tensor(self.rng.standard_normal((2, 3, 4, 5)), requires_grad=True)
        b = Tensor(self.rng.standard_normal((5, 2)), requires_grad=True)
        self.assertGradientsMatch(lambda: (a @ b).tanh().sum(), [a, b])

    def test_shape_ops_and_indexing(self):
        a = Tensor(self.rng.standard_normal((2, 3, 4)), requires_grad=True)
        index = np.array([0, 2, 2])
        self.assertGradientsMatch(
            lambda: (a.transpose(2, 0, 1).reshape(4, 6)[1:3].sum() + a[:, index].sum() * 0.5
                     + F.concat([a, a * 2.0], axis=1).swapaxes(0, 2).mean()),
            [a])

    def test_repeated_parents_accumulate(self):
        a = Tensor(np.array([3.0]), requires_grad=True)
        (a * a + a).sum().backward()
        np.testing.assert_allclose(a.grad, [7.0])

    def test_backward_needs_scalar(self):
        a = Tensor(np.ones(3), requires_grad=True)
        with self.assertRaises(ContractError):
            backward(a * 2.0)

    def test_matmul_rejects_mismatched_inner_dims(self):
        with self.assertRaises(DimensionError):
            Tensor(np.ones((2, 3))) @ Tensor(np.ones((2, 3)))
        with self.assertRaises(DimensionError):
            Tensor(np.ones(3)) @ Tensor(np.ones((3, 1)))

    def test_no_grad_records_nothing(self):
        a = Tensor(np.ones(3), requires_grad=True)
        with no_grad():
            out = (a * 2.0).sum()
        self.assertFalse(out.requires_grad)
        self.assertEqual(out.op_record, ((), None))

    def test_item_needs_single_element(self):
        self.assertEqual(Tensor([[2.5]]).item(), 2.5)
        with self.assertRaises(ContractError):
            Tensor([1.0, 2.0]).item()

    def test_mean_over_empty_axis(self):
        with self.assertRaises(DimensionError):
            Tensor(np.ones((0, 3))).mean(axis=0)


class FunctionalTests(GradientCheckMixin, SimpleTestCase):
    def setUp(self):
        self.rng = np.random.default_rng(1)

    def test_causal_conv_ignores_the_future(self):
        conv = Conv1d(2, 3, 4, self.rng, causal=True)
        x = self.rng.standard_normal((1, 2, 12))
        changed = x.copy()
        changed[..., 7:] += 10.0
        base = conv(Tensor(x)).data
        moved = conv(Tensor(changed)).data
        np.testing.assert_array_equal(base[..., :7], moved[..., :7])
        self.assertFalse(np.allclose(base[..., 7], moved[..., 7]))

    def test_conv_matches_direct_sum(self):
        kernel = self.rng.standard_normal((2, 3, 3))
        x = self.rng.standard_normal((3, 7))
        out = F.conv1d(Tensor(x), Tensor(kernel), None, 1, 1).data
        padded = np.pad(x, ((0, 0), (1, 1)))
        expected = np.array([[np.sum(kernel[o] * padded[:, t:t + 3]) for t in range(7)] for o in range(2)])
        np.testing.assert_allclose(out, expected, atol=1e-12)

    def test_conv_gradients_with_lead_dims(self):
        x = Tensor(self.rng.standard_normal((2, 3, 2, 9)), requires_grad=True)
        conv = Conv1d(2, 3, 4, self.rng, causal=True)
        self.assertGradientsMatch(lambda: conv(x).tanh().sum(), [x, conv.weight, conv.bias])

    def test_softmax_family(self):
        x = Tensor(self.rng.standard_normal((3, 5)) * 3, requires_grad=True)
        probs = F.softmax(x).data
        np.testing.assert_allclose(probs.sum(axis=-1), 1.0)
        np.testing.assert_allclose(F.log_softmax(x).data, np.log(probs), atol=1e-12)
        weights = self.rng.standard_normal((3, 5))
        self.assertGradientsMatch(lambda: (F.softmax(x) * weights).sum() + (F.log_softmax(x) * weights).sum(), [x])

    def test_layer_norm_and_linear_gradients(self):
        x = Tensor(self.rng.standard_normal((4, 6)), requires_grad=True)
        norm, linear = LayerNorm(6), Linear(6, 3, self.rng)
        norm.gain.data[...] = self.rng.uniform(0.5, 1.5, 6)
        self.assertGradientsMatch(lambda: linear(norm(x)).tanh().sum(),
                                  [x, norm.gain, norm.shift, linear.weight, linear.bias])

    def test_layer_norm_output_is_standardized(self):
        out = F.layer_norm(Tensor(self.rng.standard_normal((5, 16)) * 4 + 2)).data
        np.testing.assert_allclose(out.mean(axis=-1), 0.0, atol=1e-12)
        np.testing.assert_allclose(out.std(axis=-1), 1.0, atol=1e-4)

    def test_linear_checks_trailing_dim(self):
        with self.assertRaises(DimensionError):
            Linear(4, 2, self.rng)(Tensor(np.ones((3, 5))))


class ModuleTests(SimpleTestCase):
    def setUp(self):
        self.rng = np.random.default_rng(2)

    def test_state_dict_roundtrip_and_mismatch(self):
        source, target = Linear(3, 2, self.rng), Linear(3, 2, self.rng)
        target.load_state_dict(source.state_dict())
        np.testing.assert_array_equal(target.weight.data, source.weight.data)
        with self.assertRaises(ModelFileError):
            target.load_state_dict({"weight": np.zeros((2, 3))})
        with self.assertRaises(ModelFileError):
            target.load_state_dict({"weight": np.zeros((3, 3)), "bias": np.zeros(2)})

    def test_he_normal_scale(self):
        weight = Linear(400, 300, np.random.default_rng(0)).weight.data
        self.assertAlmostEqual(weight.std(), np.sqrt(2.0 / 400), delta=0.002)

    def test_adam_moves_against_the_gradient(self):
        p = Parameter(np.array([1.0, -1.0]))
        p.grad = np.array([0.5, -0.5])
        adam_step([p], lr=0.1)
        # the first bias-corrected step has magnitude lr
        np.testing.assert_allclose(p.data, [0.9, -0.9], atol=1e-6)

    def test_adam_minimizes_a_quadratic(self):
        p = Parameter(np.array([3.0, -2.0]))
        optimizer = Adam([p], lr=0.1)
        for _ in range(500):
            optimizer.zero_grad()
            (p * p).sum().backward()
            optimizer.step()
        np.testing.assert_allclose(p.data, 0.0, atol=0.1)

    def test_adam_two_steps_match_the_closed_form(self):
        b1, b2, lr, eps = 0.9, 0.999, 0.01, 1e-8
        g1, g2 = np.array([0.4, -2.0]), np.array([-0.1, 3.0])
        p = Parameter(np.array([1.0, 2.0]))
        for grad in (g1, g2):
            p.grad = grad
            adam_step([p], lr, b1, b2, eps)
        first = np.array([1.0, 2.0]) - lr * g1 / (np.abs(g1) + eps)
        m = (b1 * (1 - b1) * g1 + (1 - b1) * g2) / (1 - b1 ** 2)
        v = (b2 * (1 - b2) * g1 ** 2 + (1 - b2) * g2 ** 2) / (1 - b2 ** 2)
        np.testing.assert_allclose(p.data, first - lr * m / (np.sqrt(v) + eps), rtol=1e-12)
        self.assertEqual(p.adam_state.step, 2)

    def test_adam_leaves_parameters_without_gradients_alone(self):
        used, gated = Parameter(np.ones(2)), Parameter(np.ones(2))
        used.grad = np.array([1.0, 1.0])
        adam_step([used, gated], lr=0.1)
        np.testing.assert_array_equal(gated.data, 1.0)
        np.testing.assert_array_equal(gated.adam_state.m, 0.0)
        self.assertEqual(gated.adam_state.step, 0)
        self.assertEqual(used.adam_state.step, 1)

        # a later gradient gets the first-step bias correction
        gated.grad = np.array([0.5, -0.5])
        adam_step([gated], lr=0.1)
        np.testing.assert_allclose(gated.data, [0.9, 1.1], atol=1e-6)


class KinkFilterTests(SimpleTestCase):
    def test_smooth_points_return_the_derivative(self):
        x = np.array([3e-7])
        loss = lambda: Tensor(x).abs().sum()
        self.assertAlmostEqual(smooth_numeric_gradient(loss, x, (0,)), 1.0, places=6)

    def test_points_inside_every_step_are_skipped(self):
        x = np.array([1e-9])
        self.assertIsNone(smooth_numeric_gradient(lambda: Tensor(x).relu().sum(), x, (0,)))
