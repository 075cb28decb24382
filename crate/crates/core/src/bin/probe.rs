// Scratch experiment harness for the population dynamics: reimplements
// the step loop with switchable rule variants to find which detail
// sustains the reciprocating oscillation at canonical parameters.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use physadder::lattice::{ArenaGeometry, HabitableMask, OccupancyGrid, Rect, TrailField};
use physadder::spectral::{dominant_frequency, periodogram, PeriodogramOptions};

#[derive(Clone, Copy, Debug, PartialEq)]
enum Variant {
    Baseline,
    RandomOnBlock,
    Pcd(f64),
    TieRandom,
    NonStrictRandom,
    Interleaved,
    NoiseInit(f64),
    ZeroTieRandom,
    ZeroTieRandomBlock,
    Floor(f64),
    Cap(f64),
    Combo(f64),
    Quant(f64),
    QuantRand(f64),
    NudgeOnBlock,
    Damp(f64),
    Saturate(f64),
    Evaporate(f64),
    EvaporateTieStay(f64),
    Jnd(f64),
    Jitter(f64),
    Blob,
    /// bit0 tie-random, bit1 nudge-on-block, bit2 random-on-block,
    /// bit3 wall-random, bit4 evaporation 0.05
    Mix(u32),
}

struct P {
    x: f64,
    y: f64,
    h: f64, // radians
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let variant = match args.get(1).map(|s| s.as_str()) {
        Some("block") => Variant::RandomOnBlock,
        Some("pcd") => Variant::Pcd(args.get(2).and_then(|s| s.parse().ok()).unwrap_or(0.02)),
        Some("tie") => Variant::TieRandom,
        Some("nonstrict") => Variant::NonStrictRandom,
        Some("inter") => Variant::Interleaved,
        Some("noise") => Variant::NoiseInit(args.get(2).and_then(|s| s.parse().ok()).unwrap_or(5.0)),
        Some("zerotie") => Variant::ZeroTieRandom,
        Some("zerotieblock") => Variant::ZeroTieRandomBlock,
        Some("floor") => Variant::Floor(args.get(2).and_then(|s| s.parse().ok()).unwrap_or(0.1)),
        Some("cap") => Variant::Cap(args.get(2).and_then(|s| s.parse().ok()).unwrap_or(10.0)),
        Some("combo") => Variant::Combo(args.get(2).and_then(|s| s.parse().ok()).unwrap_or(0.1)),
        Some("quant") => Variant::Quant(args.get(2).and_then(|s| s.parse().ok()).unwrap_or(1.0)),
        Some("quantrand") => {
            Variant::QuantRand(args.get(2).and_then(|s| s.parse().ok()).unwrap_or(1.0))
        }
        Some("nudge") => Variant::NudgeOnBlock,
        Some("damp") => Variant::Damp(args.get(2).and_then(|s| s.parse().ok()).unwrap_or(0.9)),
        Some("sat") => Variant::Saturate(args.get(2).and_then(|s| s.parse().ok()).unwrap_or(10.0)),
        Some("evap") => Variant::Evaporate(args.get(2).and_then(|s| s.parse().ok()).unwrap_or(0.05)),
        Some("evapstay") => {
            Variant::EvaporateTieStay(args.get(2).and_then(|s| s.parse().ok()).unwrap_or(0.05))
        }
        Some("jnd") => Variant::Jnd(args.get(2).and_then(|s| s.parse().ok()).unwrap_or(0.2)),
        Some("jitter") => Variant::Jitter(args.get(2).and_then(|s| s.parse().ok()).unwrap_or(5.0)),
        Some("blob") => Variant::Blob,
        Some("mix") => Variant::Mix(args.get(2).and_then(|s| s.parse().ok()).unwrap_or(0)),
        _ => Variant::Baseline,
    };
    let fraction: f64 = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(1.0);
    let seed: u64 = args.get(4).and_then(|s| s.parse().ok()).unwrap_or(1);
    let steps: u32 = args.get(5).and_then(|s| s.parse().ok()).unwrap_or(12000);
    let population: usize = args.get(6).and_then(|s| s.parse().ok()).unwrap_or(5000);
    println!("variant {variant:?} fraction {fraction} seed {seed} population {population}");

    let geometry = ArenaGeometry::default().with_fraction(fraction);
    let mask = HabitableMask::build(&geometry).unwrap();
    let full = geometry.full_rect();
    let window = Rect::new(full.x, full.y, 20, 20);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut field = TrailField::new(geometry.lattice_width, geometry.lattice_height);
    let mut occ = OccupancyGrid::new(geometry.lattice_width, geometry.lattice_height);
    if let Variant::NoiseInit(level) = variant {
        for y in 0..geometry.lattice_height {
            for x in 0..geometry.lattice_width {
                if mask.is_habitable(x as i64, y as i64) {
                    field.set(x, y, rng.random_range(0.0..level));
                }
            }
        }
    }

    // Inoculate 5000 over the full region, then freeze outside the mask.
    let mut cells: Vec<(usize, usize)> = if variant == Variant::Blob {
        // solid central block: population/20 columns wide, fully packed
        let cols = population / full.height;
        let x0 = full.x + (full.width - cols) / 2;
        (full.y..full.bottom())
            .flat_map(|y| (x0..x0 + cols).map(move |x| (x, y)))
            .collect()
    } else {
        (full.y..full.bottom())
            .flat_map(|y| (full.x..full.right()).map(move |x| (x, y)))
            .collect()
    };
    cells.shuffle(&mut rng);
    let mut ps: Vec<P> = Vec::new();
    for &(cx, cy) in cells.iter().take(population) {
        let h: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        ps.push(P {
            x: cx as f64 + 0.5,
            y: cy as f64 + 0.5,
            h,
        });
    }
    let mut live: Vec<u32> = Vec::new();
    let mut id = 0u32;
    ps.retain(|p| {
        let keep = true;
        let (cx, cy) = (p.x.floor() as i64, p.y.floor() as i64);
        occ.place(id, cx, cy).unwrap();
        if mask.is_habitable(cx, cy) {
            live.push(id);
        }
        id += 1;
        keep
    });

    let sa = 90f64.to_radians();
    let ra = 22.5f64.to_radians();
    let so = 15.0;
    let tau = std::f64::consts::TAU;

    let mut flux = Vec::new();
    let mut com = Vec::new();
    let mut order: Vec<u32> = Vec::new();
    let mut move_hist = Vec::new();
    for step in 1..=steps {
        if variant == Variant::Interleaved {
            // One random pass: each particle senses and immediately moves.
            order.clear();
            order.extend_from_slice(&live);
            order.shuffle(&mut rng);
            let mut moves = 0usize;
            for &i in &order {
                let p = &mut ps[i as usize];
                let read = |a: f64| {
                    let sx = (p.x + so * a.cos()).floor() as i64;
                    let sy = (p.y + so * a.sin()).floor() as i64;
                    field.sample(sx, sy)
                };
                let f = read(p.h);
                let fl = read(p.h - sa);
                let fr = read(p.h + sa);
                if f > fl && f > fr {
                } else if f < fl && f < fr {
                    p.h += if rng.random::<bool>() { ra } else { -ra };
                } else if fl < fr {
                    p.h += ra;
                } else if fr < fl {
                    p.h -= ra;
                }
                p.h = p.h.rem_euclid(tau);
                let nx = p.x + p.h.cos();
                let ny = p.y + p.h.sin();
                let t = (nx.floor() as i64, ny.floor() as i64);
                let c = (p.x.floor() as i64, p.y.floor() as i64);
                if !mask.is_habitable(t.0, t.1) || (t != c && occ.is_occupied(t.0, t.1)) {
                    continue;
                }
                if t != c {
                    occ_relocate(&mut occ, i, c, t);
                }
                p.x = nx;
                p.y = ny;
                field.deposit(t.0, t.1, 5.0).unwrap();
                moves += 1;
            }
            field.diffuse(&mask, 0.99).unwrap();
            if step % 5 == 0 {
                flux.push(field.mean_in_window(window).unwrap());
            }
            move_hist.push(moves);
            if step % 1000 == 0 {
                let recent: usize = move_hist[step as usize - 1000..].iter().sum();
                println!(
                    "step {step}: moves/step {:.1} field_total {:.1} window {:.3}",
                    recent as f64 / 1000.0,
                    field.total(),
                    field.mean_in_window(window).unwrap()
                );
            }
            continue;
        }
        // sensory
        order.clear();
        order.extend_from_slice(&live);
        order.shuffle(&mut rng);
        for &i in &order {
            let p = &mut ps[i as usize];
            if let Variant::Pcd(prob) = variant {
                if rng.random::<f64>() < prob {
                    p.h = rng.random_range(0.0..tau);
                    continue;
                }
            }
            let sensor_floor = match variant {
                Variant::Floor(eps) | Variant::Combo(eps) => eps,
                _ => 0.0,
            };
            let quantum = match variant {
                Variant::Quant(q) | Variant::QuantRand(q) => q,
                _ => 0.0,
            };
            let saturation = match variant {
                Variant::Saturate(s) => s,
                _ => f64::INFINITY,
            };
            let read = |a: f64| {
                let sx = (p.x + so * a.cos()).floor() as i64;
                let sy = (p.y + so * a.sin()).floor() as i64;
                let v = field.sample(sx, sy);
                if quantum > 0.0 {
                    (v / quantum).floor() * quantum
                } else if v < sensor_floor {
                    0.0
                } else {
                    v.min(saturation)
                }
            };
            let f = read(p.h);
            let fl = read(p.h - sa);
            let fr = read(p.h + sa);
            if let Variant::Jnd(tol) = variant {
                let gt = |a: f64, b: f64| a > b + tol;
                if gt(f, fl) && gt(f, fr) {
                } else if gt(fl, f) && gt(fr, f) {
                    p.h += if rng.random::<bool>() { ra } else { -ra };
                } else if gt(fr, fl) {
                    p.h += ra;
                } else if gt(fl, fr) {
                    p.h -= ra;
                } else {
                    p.h += if rng.random::<bool>() { ra } else { -ra };
                }
                p.h = p.h.rem_euclid(tau);
            } else if variant == Variant::NonStrictRandom {
                if f <= fl && f <= fr && !(f > fl && f > fr) {
                    p.h += if rng.random::<bool>() { ra } else { -ra };
                } else if f > fl && f > fr {
                } else if fl < fr {
                    p.h += ra;
                } else if fr < fl {
                    p.h -= ra;
                }
            } else if f > fl && f > fr {
            } else if f < fl && f < fr {
                p.h += if rng.random::<bool>() { ra } else { -ra };
            } else if fl < fr {
                p.h += ra;
            } else if fr < fl {
                p.h -= ra;
            } else if variant == Variant::TieRandom {
                p.h += if rng.random::<bool>() { ra } else { -ra };
            } else if matches!(
                variant,
                Variant::ZeroTieRandom
                    | Variant::ZeroTieRandomBlock
                    | Variant::Floor(_)
                    | Variant::Combo(_)
            ) && f == 0.0
                && fl == 0.0
                && fr == 0.0
            {
                p.h += if rng.random::<bool>() { ra } else { -ra };
            } else if matches!(
                variant,
                Variant::QuantRand(_) | Variant::Saturate(_) | Variant::Evaporate(_)
            ) {
                p.h += if rng.random::<bool>() { ra } else { -ra };
            } else if matches!(variant, Variant::Mix(bits) if bits & 1 != 0) {
                p.h += if rng.random::<bool>() { ra } else { -ra };
            }
            if let Variant::Jitter(eta_deg) = variant {
                let eta = eta_deg.to_radians();
                p.h += rng.random_range(-eta..eta);
            }
            p.h = p.h.rem_euclid(tau);
        }
        // motor
        order.clear();
        order.extend_from_slice(&live);
        order.shuffle(&mut rng);
        let mut moves = 0usize;
        for &i in &order {
            let p = &mut ps[i as usize];
            let nx = p.x + p.h.cos();
            let ny = p.y + p.h.sin();
            let t = (nx.floor() as i64, ny.floor() as i64);
            let c = (p.x.floor() as i64, p.y.floor() as i64);
            if !mask.is_habitable(t.0, t.1) {
                if matches!(
                    variant,
                    Variant::RandomOnBlock
                        | Variant::ZeroTieRandomBlock
                        | Variant::Combo(_)
                        | Variant::Quant(_)
                ) {
                    p.h = rng.random_range(0.0..tau);
                } else if variant == Variant::NudgeOnBlock {
                    p.h = (p.h + if rng.random::<bool>() { ra } else { -ra }).rem_euclid(tau);
                } else if let Variant::Mix(bits) = variant {
                    if bits & 8 != 0 || bits & 4 != 0 {
                        p.h = rng.random_range(0.0..tau);
                    } else if bits & 2 != 0 {
                        p.h = (p.h + if rng.random::<bool>() { ra } else { -ra }).rem_euclid(tau);
                    }
                }
                continue;
            }
            if t != c && occ.is_occupied(t.0, t.1) {
                if matches!(variant, Variant::RandomOnBlock | Variant::ZeroTieRandomBlock) {
                    p.h = rng.random_range(0.0..tau);
                } else if variant == Variant::NudgeOnBlock {
                    p.h = (p.h + if rng.random::<bool>() { ra } else { -ra }).rem_euclid(tau);
                } else if let Variant::Mix(bits) = variant {
                    if bits & 4 != 0 {
                        p.h = rng.random_range(0.0..tau);
                    } else if bits & 2 != 0 {
                        p.h = (p.h + if rng.random::<bool>() { ra } else { -ra }).rem_euclid(tau);
                    }
                }
                continue;
            }
            if t != c {
                // occupancy relocate
                let _ = occ;
                occ_relocate(&mut occ, i, c, t);
            }
            p.x = nx;
            p.y = ny;
            field.deposit(t.0, t.1, 5.0).unwrap();
            if let Variant::Cap(cap) = variant {
                let v = field.get(t.0 as usize, t.1 as usize);
                if v > cap {
                    field.set(t.0 as usize, t.1 as usize, cap);
                }
            }
            moves += 1;
        }
        let damp = match variant {
            Variant::Damp(d) => d,
            _ => 0.99,
        };
        field.diffuse(&mask, damp).unwrap();
        let evap_delta = match variant {
            Variant::Mix(bits) if bits & 16 != 0 => Some(0.05),
            Variant::Evaporate(d) | Variant::EvaporateTieStay(d) => Some(d),
            _ => None,
        };
        if let Some(delta) = evap_delta {
            for y in 0..geometry.lattice_height {
                for x in 0..geometry.lattice_width {
                    let v = field.get(x, y);
                    if v > 0.0 {
                        field.set(x, y, (v - delta).max(0.0));
                    }
                }
            }
        }
        if step % 5 == 0 {
            flux.push(field.mean_in_window(window).unwrap());
            com.push(trail_com_x(&field, &geometry));
        }
        move_hist.push(moves);
        if step % 1000 == 0 {
            let recent: usize = move_hist[step as usize - 1000..].iter().sum();
            println!(
                "step {step}: moves/step {:.1} field_total {:.1} window {:.3} com_x {:.3}",
                recent as f64 / 1000.0,
                field.total(),
                field.mean_in_window(window).unwrap(),
                com.last().copied().unwrap_or(0.5)
            );
        }
    }

    // centre-of-mass spectrum: does the trail slosh along the channel?
    let post_com: Vec<f64> = com[(2000 / 5).min(com.len())..].to_vec();
    if post_com.len() >= 16 {
        let spec = periodogram(&post_com, 5.0, &PeriodogramOptions::default()).unwrap();
        if let Ok(dom) = dominant_frequency(&spec, spec.default_min_frequency()) {
            let mags = spec.magnitudes();
            let mut non_dc: Vec<f64> = mags[1..].to_vec();
            non_dc.sort_by(|a, b| a.total_cmp(b));
            let median = non_dc[non_dc.len() / 2];
            println!(
                "com dominant {} magnitude {:.4} peak/median {:.1}",
                dom.frequency,
                dom.magnitude,
                dom.magnitude / median.max(1e-300)
            );
        }
    }

    // dump flux for inspection
    let mut csv = String::from("step,mean_flux\n");
    for (i, v) in flux.iter().enumerate() {
        csv.push_str(&format!("{},{v}\n", (i + 1) * 5));
    }
    std::fs::write(format!("/tmp/probe_flux_{fraction}_{seed}.csv"), csv).unwrap();

    // post-warmup spectrum
    let post: Vec<f64> = flux[(2000 / 5).min(flux.len())..].to_vec();
    if post.len() >= 16 {
        let spec = periodogram(&post, 5.0, &PeriodogramOptions::default()).unwrap();
        if let Ok(dom) = dominant_frequency(&spec, spec.default_min_frequency()) {
            let mags = spec.magnitudes();
            let mut non_dc: Vec<f64> = mags[1..].to_vec();
            non_dc.sort_by(|a, b| a.total_cmp(b));
            let median = non_dc[non_dc.len() / 2];
            println!(
                "dominant {} cycles/step magnitude {:.3} peak/median {:.1}",
                dom.frequency,
                dom.magnitude,
                dom.magnitude / median.max(1e-300)
            );
            // top five local peaks for diagnostics
            let freqs = spec.frequencies();
            let mut peaks: Vec<(f64, f64)> = (2..mags.len() - 1)
                .filter(|&k| mags[k] > mags[k - 1] && mags[k] >= mags[k + 1])
                .map(|k| (freqs[k], mags[k]))
                .collect();
            peaks.sort_by(|a, b| b.1.total_cmp(&a.1));
            for (f, m) in peaks.iter().take(5) {
                println!("  peak f={f:.5} mag={m:.2}");
            }
        }
    }
}

fn occ_relocate(occ: &mut OccupancyGrid, _id: u32, from: (i64, i64), to: (i64, i64)) {
    let id = occ.remove(from.0, from.1).unwrap();
    occ.place(id, to.0, to.1).unwrap();
}

// Normalised x centre of mass of the trail inside the habitable strip.
fn trail_com_x(field: &TrailField, geometry: &ArenaGeometry) -> f64 {
    let full = geometry.full_rect();
    let mut total = 0.0;
    let mut weighted = 0.0;
    for y in full.y..full.bottom() {
        for x in full.x..full.right() {
            let v = field.get(x, y);
            total += v;
            weighted += v * (x - full.x) as f64;
        }
    }
    if total > 0.0 {
        weighted / total / full.width as f64
    } else {
        0.5
    }
}
