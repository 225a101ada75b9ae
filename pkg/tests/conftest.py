import numpy as np
import pytest

from emdkit import SampledSignal


def sine(freq: float, sample_rate: float, duration: float, amplitude: float = 1.0,
         phase: float = 0.0) -> SampledSignal:
    n = int(round(sample_rate * duration))
    t = np.arange(n) / sample_rate
    return SampledSignal(amplitude * np.sin(2 * np.pi * freq * t + phase), sample_rate)


def fft_peak_hz(x: SampledSignal) -> float:
    """Frequency of the largest FFT magnitude bin (DC excluded)."""
    spectrum = np.abs(np.fft.rfft(x.samples))
    spectrum[0] = 0.0
    freqs = np.fft.rfftfreq(x.n, x.dt)
    return float(freqs[int(np.argmax(spectrum))])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
