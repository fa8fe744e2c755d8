"""Command-line front end: ``domewave <subcommand> --config ... --out ...``.

Every command is deterministic given (config, seed, flags): reruns produce
byte-identical output files. Nothing is written except to user-specified
paths. Exit codes: 0 success, 1 validation error, 2 runtime error. The
environment variable DOMEWAVE_THREADS caps internal parallelism (0 = auto).
"""

import argparse
import json
import logging
import sys
from dataclasses import replace

import numpy as np

from . import config as config_mod
from . import field, resonance
from . import sweep as sweep_mod
from .errors import CrcMismatch, DomewaveError, ParseError, ValidationError
from .fileio import read_pgm, read_wav, write_pgm, write_wav
from .link import (apply_channel, compute_spectrogram, decode_image, demodulate,
                   encode_image, estimate_snr, frame_bit_count,
                   full_scale_amplitude, modulate)
from .units import parse_quantity

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_RUNTIME = 2

log = logging.getLogger("domewave")


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on bad usage; here exit 2 is reserved for runtime errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


def _load_config(args):
    if getattr(args, "config", None):
        cfg = config_mod.parse_config(args.config)
    else:
        cfg = config_mod.default_config()
    for line in cfg.defaults_applied:
        log.info("default applied: %s", line)
    link = cfg.link
    if getattr(args, "seed", None) is not None:
        link = replace(link, seed=args.seed)
    if getattr(args, "drive_db", None) is not None:
        link = replace(link, drive_level_db=args.drive_db)
    if link is not cfg.link:
        cfg = replace(cfg, link=link)
    return cfg


def _write_text(path, text):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _write_json(path, obj):
    _write_text(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _emit(args, text):
    if getattr(args, "out", None):
        _write_text(args.out, text)
    else:
        sys.stdout.write(text)


# --- subcommand handlers ---

def _cmd_resonance(args):
    cfg = _load_config(args)
    geom, film = cfg.geometry, cfg.film
    rigidity = resonance.flexural_rigidity(film, geom.thickness_T)
    tension = resonance.spherical_cap_tension(geom, film)
    areal = film.density_rho_f * geom.thickness_T
    model = resonance.ResonanceModel(rigidity, tension, areal, geom.radius_R)
    k_r = resonance.solve_wavenumber(model)
    report = {
        "first_resonance_hz": resonance.resonance_frequency(model),
        "wavenumber_kr_per_m": k_r,
        "kr_times_R": k_r * geom.radius_R,
        "flexural_rigidity_Nm": rigidity,
        "tension_N_per_m": tension,
        "areal_density_kg_per_m2": areal,
    }
    _emit(args, json.dumps(report, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def _cmd_spl(args):
    cfg = _load_config(args)
    freq = parse_quantity(args.freq, "frequency", "--freq") if args.freq else cfg.drive.frequency_f
    layout = field.build_array(cfg.panel_extent, cfg.pitch, cfg.geometry, cfg.drive)
    pressure = field.rayleigh_pressure(layout, cfg.film, cfg.medium, cfg.observation, freq)
    report = {
        "frequency_hz": freq,
        "position_m": list(cfg.observation.position),
        "pressure_re_pa": pressure.real,
        "pressure_im_pa": pressure.imag,
        "magnitude_pa": abs(pressure),
        "spl_db_re_1uPa": field.spl(pressure, cfg.medium),
        "elements": len(layout),
    }
    _emit(args, json.dumps(report, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def _cmd_beam(args):
    cfg = _load_config(args)
    freq = parse_quantity(args.freq, "frequency", "--freq") if args.freq else cfg.drive.frequency_f
    arc = parse_quantity(args.arc_radius, "length", "--arc-radius")
    layout = field.build_array(cfg.panel_extent, cfg.pitch, cfg.geometry, cfg.drive)
    angles = np.linspace(args.from_, args.to, args.steps)
    rows = field.beam_pattern(layout, cfg.film, cfg.medium, freq, arc, angles,
                              plane_azimuth_deg=args.plane_azimuth)
    lines = ["angle_deg,spl_db"] + [f"{repr(a)},{repr(s)}" for a, s in rows]
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def _cmd_sweep(args):
    cfg = _load_config(args)
    parameter = args.param or (cfg.sweep.parameter if cfg.sweep else None)
    if parameter is None:
        raise ValidationError("need --param or a config sweep section", "--param")
    kind = "frequency" if parameter == "frequency" else "length"
    start = parse_quantity(args.from_, kind, "--from") if args.from_ is not None else None
    stop = parse_quantity(args.to, kind, "--to") if args.to is not None else None
    spec = cfg.sweep_spec(parameter, start, stop, args.steps)
    rows = sweep_mod.run_sweep(spec)
    _emit(args, sweep_mod.rows_to_csv(rows))
    return EXIT_OK


def _cmd_freq_response(args):
    cfg = _load_config(args)
    f_lo = parse_quantity(args.from_, "frequency", "--from")
    f_hi = parse_quantity(args.to, "frequency", "--to")
    layout = field.build_array(cfg.panel_extent, cfg.pitch, cfg.geometry, cfg.drive)
    response = sweep_mod.frequency_response(
        layout, cfg.film, cfg.medium, cfg.observation, (f_lo, f_hi), args.steps)
    _emit(args, response.to_csv())
    return EXIT_OK


def _cmd_calibrate(args):
    cfg = _load_config(args)
    freq = parse_quantity(args.freq, "frequency", "--freq") if args.freq else cfg.drive.frequency_f
    layout = field.build_array(cfg.panel_extent, cfg.pitch, cfg.geometry, cfg.drive)
    result = field.calibrate_d_eff(
        layout, cfg.medium, args.target_db, cfg.observation, freq,
        cfg.drive.amplitude_Vm)
    report = {
        "d_eff_m_per_V": result.d_eff,
        "target_spl_db": args.target_db,
        "achieved_spl_db": result.achieved_spl_db,
        "iterations": result.iterations,
        "frequency_hz": freq,
        "observation_m": list(cfg.observation.position),
        "drive_amplitude_V": cfg.drive.amplitude_Vm,
        "elements": len(layout),
    }
    _emit(args, json.dumps(report, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def _cmd_tx(args):
    cfg = _load_config(args)
    image = read_pgm(args.image)
    bits = encode_image(image)
    amplitude = full_scale_amplitude(cfg.link, cfg.drive.amplitude_Vm)
    waveform = modulate(bits, cfg.plan, cfg.link.sample_rate, amplitude)
    write_wav(args.out, waveform, cfg.link.sample_rate)
    log.info("tx: %d bits, %d samples at %d Hz", bits.size, waveform.size,
             cfg.link.sample_rate)
    return EXIT_OK


def _cmd_channel(args):
    cfg = _load_config(args)
    waveform, rate = read_wav(args.infile)
    if rate != cfg.link.sample_rate:
        raise ValidationError(
            f"WAV rate {rate} != configured sample rate {cfg.link.sample_rate}",
            "--in")
    write_wav(args.out, apply_channel(waveform, cfg.link), rate)
    return EXIT_OK


def _rx_metrics(cfg, received, result, sent_bits, crc_ok):
    snr = estimate_snr(received, cfg.plan, cfg.link.sample_rate,
                       start_sample=result.start_sample)
    if sent_bits is not None:
        n = min(sent_bits.size, result.bits.size)
        errored = int(np.sum(sent_bits[:n] != result.bits[:n]))
        bit_error_rate = errored / n
        bits_sent = int(sent_bits.size)
    else:
        errored, bit_error_rate, bits_sent = None, None, None
    return {
        "snr_db": snr.snr_db,
        "snr_floor_limited": snr.floor_limited,
        "ber": bit_error_rate,
        "bits_sent": bits_sent,
        "bits_errored": errored,
        "drive_level_db": cfg.link.drive_level_db,
        "seed": cfg.link.seed,
        "crc_ok": crc_ok,
    }


def _decode_received(result, width, height):
    try:
        return decode_image(result.bits, width, height), True
    except CrcMismatch as exc:
        if len(exc.payload) == width * height:
            damaged = np.frombuffer(exc.payload, dtype=np.uint8).reshape(height, width)
        else:
            damaged = np.zeros((height, width), dtype=np.uint8)
        return damaged, False


def _cmd_rx(args):
    cfg = _load_config(args)
    received, rate = read_wav(args.infile)
    if rate != cfg.link.sample_rate:
        raise ValidationError(
            f"WAV rate {rate} != configured sample rate {cfg.link.sample_rate}",
            "--in")
    result = demodulate(received, cfg.plan, cfg.link.sample_rate)
    image, crc_ok = _decode_received(result, args.width, args.height)
    write_pgm(args.out_image, image)
    sent_bits = encode_image(read_pgm(args.sent_image)) if args.sent_image else None
    _write_json(args.metrics, _rx_metrics(cfg, received, result, sent_bits, crc_ok))
    return EXIT_OK


def _cmd_spectrogram(args):
    waveform, rate = read_wav(args.infile)
    spec = compute_spectrogram(waveform, args.window, args.hop, rate,
                               window=args.window_type)
    _write_text(args.out, spec.to_csv())
    if args.pgm:
        db = spec.power_db
        lo, hi = float(db.min()), float(db.max())
        span = hi - lo if hi > lo else 1.0
        gray = np.round((db - lo) / span * 255.0).astype(np.uint8)
        write_pgm(args.pgm, gray.T[::-1])  # frequency up the page, time rightward
        _write_text(args.pgm + ".txt",
                    f"gray 0 = {lo!r} dB\ngray 255 = {hi!r} dB\n"
                    f"rows = frequency (top = {spec.freqs[-1]!r} Hz), "
                    f"cols = frames\n")
    return EXIT_OK


def _cmd_loopback(args):
    cfg = _load_config(args)
    image = read_pgm(args.image)
    bits = encode_image(image)
    amplitude = full_scale_amplitude(cfg.link, cfg.drive.amplitude_Vm)
    tx_wave = modulate(bits, cfg.plan, cfg.link.sample_rate, amplitude)
    rx_wave = apply_channel(tx_wave, cfg.link)
    if args.wav_out:
        write_wav(args.wav_out, rx_wave, cfg.link.sample_rate)
    result = demodulate(rx_wave, cfg.plan, cfg.link.sample_rate)
    decoded, crc_ok = _decode_received(result, image.shape[1], image.shape[0])
    write_pgm(args.out_image, decoded)
    _write_json(args.metrics, _rx_metrics(cfg, rx_wave, result, bits, crc_ok))
    return EXIT_OK


# --- parser assembly ---

def _add_common(sub):
    sub.add_argument("--config", metavar="PATH",
                     help="JSON configuration file (defaults apply when omitted)")
    sub.add_argument("--seed", type=int, metavar="N",
                     help="override the link noise seed [dimensionless]")
    sub.add_argument("--drive-db", dest="drive_db", type=float, metavar="X",
                     help="override drive level [dB re full scale]")


def build_parser():
    parser = _Parser(prog="domewave",
                     description="Microdome-array underwater transducer and "
                                 "FH-BFSK link simulator.",
                     epilog="DOMEWAVE_THREADS caps internal parallelism (0 = auto).")
    commands = parser.add_subparsers(dest="command", required=True,
                                     parser_class=_Parser)

    p = commands.add_parser("resonance", help="first resonance of the configured dome")
    _add_common(p)
    p.add_argument("--out", metavar="PATH", help="JSON report path (stdout when omitted)")
    p.set_defaults(func=_cmd_resonance)

    p = commands.add_parser("spl", help="SPL at the configured observation point")
    _add_common(p)
    p.add_argument("--freq", metavar="F", help="drive frequency [Hz], e.g. 20kHz")
    p.add_argument("--out", metavar="PATH", help="JSON report path (stdout when omitted)")
    p.set_defaults(func=_cmd_spl)

    p = commands.add_parser("beam", help="SPL on an arc through the array centre")
    _add_common(p)
    p.add_argument("--freq", metavar="F", help="drive frequency [Hz], e.g. 200kHz")
    p.add_argument("--arc-radius", required=True, metavar="R",
                   help="arc radius [m], e.g. 1m")
    p.add_argument("--from", dest="from_", type=float, required=True, metavar="A",
                   help="first angle [deg], within (-90, 90)")
    p.add_argument("--to", type=float, required=True, metavar="B",
                   help="last angle [deg], within (-90, 90)")
    p.add_argument("--steps", type=int, required=True, metavar="N",
                   help="number of angles [count]")
    p.add_argument("--plane-azimuth", type=float, default=0.0, metavar="PHI",
                   help="azimuth of the scan plane about z [deg]")
    p.add_argument("--out", metavar="PATH", help="CSV path (stdout when omitted)")
    p.set_defaults(func=_cmd_beam)

    p = commands.add_parser("sweep", help="parametric sweep (CSV table)")
    _add_common(p)
    p.add_argument("--param", choices=sweep_mod.PARAMETERS,
                   help="swept parameter (overrides the config sweep section)")
    p.add_argument("--from", dest="from_", metavar="LO",
                   help="range start [m for lengths, Hz for frequency]")
    p.add_argument("--to", metavar="HI",
                   help="range stop [m for lengths, Hz for frequency]")
    p.add_argument("--steps", type=int, metavar="N", help="grid points [count] (>= 2)")
    p.add_argument("--out", metavar="PATH", help="CSV path (stdout when omitted)")
    p.set_defaults(func=_cmd_sweep)

    p = commands.add_parser("freq-response",
                            help="SPL vs frequency at the observation point")
    _add_common(p)
    p.add_argument("--from", dest="from_", required=True, metavar="LO",
                   help="lowest frequency [Hz], e.g. 10kHz")
    p.add_argument("--to", required=True, metavar="HI",
                   help="highest frequency [Hz], e.g. 200kHz")
    p.add_argument("--steps", type=int, required=True, metavar="N",
                   help="frequency points [count]")
    p.add_argument("--out", metavar="PATH", help="CSV path (stdout when omitted)")
    p.set_defaults(func=_cmd_freq_response)

    p = commands.add_parser("calibrate",
                            help="invert the model for d_eff from a target SPL")
    _add_common(p)
    p.add_argument("--target-db", dest="target_db", type=float, required=True,
                   metavar="SPL", help="target level [dB re 1 uPa]")
    p.add_argument("--freq", metavar="F", help="drive frequency [Hz], e.g. 20kHz")
    p.add_argument("--out", metavar="PATH", help="JSON report path (stdout when omitted)")
    p.set_defaults(func=_cmd_calibrate)

    p = commands.add_parser("tx", help="frame and modulate an image to a WAV")
    _add_common(p)
    p.add_argument("--image", required=True, metavar="PATH", help="input PGM (P5, 8-bit)")
    p.add_argument("--out", required=True, metavar="PATH",
                   help="output WAV (mono, float32) [V]")
    p.set_defaults(func=_cmd_tx)

    p = commands.add_parser("channel",
                            help="transducer + water + hydrophone chain on a WAV")
    _add_common(p)
    p.add_argument("--in", dest="infile", required=True, metavar="PATH",
                   help="input drive WAV [V]")
    p.add_argument("--out", required=True, metavar="PATH",
                   help="output hydrophone WAV [V]")
    p.set_defaults(func=_cmd_channel)

    p = commands.add_parser("rx", help="demodulate and decode a received WAV")
    _add_common(p)
    p.add_argument("--in", dest="infile", required=True, metavar="PATH",
                   help="received WAV [V]")
    p.add_argument("--out-image", dest="out_image", required=True, metavar="PATH",
                   help="decoded PGM path")
    p.add_argument("--metrics", required=True, metavar="PATH",
                   help="metrics JSON path")
    p.add_argument("--width", type=int, required=True, metavar="W",
                   help="expected image width [pixels]")
    p.add_argument("--height", type=int, required=True, metavar="H",
                   help="expected image height [pixels]")
    p.add_argument("--sent-image", dest="sent_image", metavar="PATH",
                   help="reference PGM for BER accounting")
    p.set_defaults(func=_cmd_rx)

    p = commands.add_parser("spectrogram", help="STFT spectrogram of a WAV")
    _add_common(p)
    p.add_argument("--in", dest="infile", required=True, metavar="PATH",
                   help="input WAV")
    p.add_argument("--out", required=True, metavar="PATH", help="CSV path")
    p.add_argument("--pgm", metavar="PATH",
                   help="optional PGM heat map (dB range in a .txt sidecar)")
    p.add_argument("--window", type=int, default=1024, metavar="N",
                   help="window length [samples]")
    p.add_argument("--hop", type=int, default=256, metavar="N",
                   help="hop length [samples]")
    p.add_argument("--window-type", dest="window_type", choices=("hann", "rect"),
                   default="hann", help="analysis window")
    p.set_defaults(func=_cmd_spectrogram)

    p = commands.add_parser("loopback",
                            help="image -> modulate -> channel -> demodulate -> image")
    _add_common(p)
    p.add_argument("--image", required=True, metavar="PATH", help="input PGM (P5, 8-bit)")
    p.add_argument("--out-image", dest="out_image", required=True, metavar="PATH",
                   help="decoded PGM path")
    p.add_argument("--metrics", required=True, metavar="PATH",
                   help="metrics JSON path")
    p.add_argument("--wav-out", dest="wav_out", metavar="PATH",
                   help="optional received-waveform WAV path")
    p.set_defaults(func=_cmd_loopback)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if not logging.getLogger().handlers:
        logging.basicConfig(level=logging.INFO, format="%(message)s",
                            stream=sys.stderr)
    try:
        return args.func(args)
    except (ParseError, ValidationError) as exc:
        print(f"domewave: validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"domewave: file error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except DomewaveError as exc:
        print(f"domewave: error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
