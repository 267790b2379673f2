"""Receiver best response and the belief constraint residuals.

The receiver's expected-utility comparison for each message reduces to the
sign of an affine residual in the sender's encoding probabilities.  The
residuals here are the expectation multiplied through by the message
probability and the prior mass, so strategies that never emit a message
yield a vacuously satisfied (zero) residual instead of a division by zero.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import Group, Population, ReceiverStrategy, SenderStrategy


@dataclass(frozen=True)
class BeliefResiduals:
    """Rescaled belief-advantage of each (receiver type, message) pair.

    A nonnegative residual means the type's best response is to take the
    message at face value.
    """

    g_A_a: float
    g_A_b: float
    g_B_a: float
    g_B_b: float

    def for_group(self, group: Group) -> tuple[float, float]:
        """(a-message residual, b-message residual) for one receiver type."""
        if group is Group.A:
            return self.g_A_a, self.g_A_b
        return self.g_B_a, self.g_B_b


def belief_residuals(
    strategy: SenderStrategy, population: Population
) -> BeliefResiduals:
    m_A, m_B = strategy.m_A, strategy.m_B
    n_A, n_B = strategy.n_A, strategy.n_B
    acc = m_A + m_B + n_A + n_B - 2.0

    pa = population.profile_A
    pb = population.profile_B
    la_A, ls_A = pa.accuracy_weight, pa.identity_weight
    dI_A, dO_A = pa.in_group_penalty, pa.out_group_penalty
    la_B, ls_B = pb.accuracy_weight, pb.identity_weight
    dI_B, dO_B = pb.in_group_penalty, pb.out_group_penalty

    return BeliefResiduals(
        g_A_a=ls_A * (dO_A * (m_B + 1.0 - n_B) - dI_A * (m_A + 1.0 - n_A))
        + la_A * acc,
        g_A_b=ls_A * (dI_A * (n_A + 1.0 - m_A) - dO_A * (n_B + 1.0 - m_B))
        + la_A * acc,
        g_B_a=ls_B * (dO_B * (m_A + 1.0 - n_A) - dI_B * (m_B + 1.0 - n_B))
        + la_B * acc,
        g_B_b=ls_B * (dI_B * (n_B + 1.0 - m_B) - dO_B * (n_A + 1.0 - m_A))
        + la_B * acc,
    )


def best_response(
    strategy: SenderStrategy, population: Population, theta_bar: Group
) -> ReceiverStrategy:
    """Pure-strategy best response of one receiver type.

    Believe a message iff its residual is >= 0; the comparison is exact and
    ties resolve to believing.
    """
    res_a, res_b = belief_residuals(strategy, population).for_group(theta_bar)
    return ReceiverStrategy(
        p=1.0 if res_a >= 0.0 else 0.0,
        q=1.0 if res_b >= 0.0 else 0.0,
    )


def believes(strategy: SenderStrategy, population: Population) -> tuple[bool, bool]:
    """Whether each receiver type's best response is to believe both messages."""
    res = belief_residuals(strategy, population)
    return (
        res.g_A_a >= 0.0 and res.g_A_b >= 0.0,
        res.g_B_a >= 0.0 and res.g_B_b >= 0.0,
    )
