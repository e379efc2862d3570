//! Buy/Sell signal generation: crossover rules over indicator series, plus
//! the random benchmark strategy.
//!
//! A cross is strict on the new side and non-strict on the old side, so flat
//! overlap never fires. Signals are evaluated on the close of bar `t` and the
//! raw stream is not yet position-filtered; pairing into trades happens in
//! the backtest layer.

use crate::error::{Error, Result};
use crate::indicators::{
    self, DmiConvention, EmaAlpha, IndicatorParams, IndicatorSeries, MomentumKind,
};
use crate::marketdata::PriceSeries;
use rand::Rng;
use serde::Serialize;
use std::fmt;
use std::rc::Rc;
use std::str::FromStr;

/// Default gap bounds for the random strategy: uniform integers on
/// [1, 29], the symmetric integer uniform with mean 15 and minimum gap 1.
pub const RND_MIN_GAP: usize = 1;
pub const RND_MAX_GAP: usize = 29;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SignalKind {
    Buy,
    Sell,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SignalEvent {
    pub index: usize,
    pub kind: SignalKind,
}

/// Ordered Buy/Sell events, indices strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct SignalSeries {
    events: Vec<SignalEvent>,
}

impl SignalSeries {
    /// Build from explicit events, enforcing the strictly-increasing-index
    /// invariant.
    pub fn from_events(events: Vec<SignalEvent>) -> Result<Self> {
        for pair in events.windows(2) {
            if pair[0].index >= pair[1].index {
                return Err(Error::arg(format!(
                    "signal indices must be strictly increasing, got {} then {}",
                    pair[0].index, pair[1].index
                )));
            }
        }
        Ok(Self { events })
    }

    pub fn events(&self) -> &[SignalEvent] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// The same events shifted right by `offset` bars.
    pub fn offset(&self, offset: usize) -> Self {
        Self {
            events: self
                .events
                .iter()
                .map(|e| SignalEvent {
                    index: e.index + offset,
                    kind: e.kind,
                })
                .collect(),
        }
    }
}

/// The thirteen rules: twelve indicator rules plus the random benchmark.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Rule {
    Sma,
    Ema,
    Mom,
    Kd,
    Macd,
    Rsi,
    Psy,
    Cci,
    Ma,
    Bias,
    Roc,
    Dmi,
    Rnd,
}

impl Rule {
    /// All rules, in rule-table order.
    pub const ALL: [Rule; 13] = [
        Rule::Sma,
        Rule::Ema,
        Rule::Mom,
        Rule::Kd,
        Rule::Macd,
        Rule::Rsi,
        Rule::Psy,
        Rule::Cci,
        Rule::Ma,
        Rule::Bias,
        Rule::Roc,
        Rule::Dmi,
        Rule::Rnd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Sma => "SMA",
            Rule::Ema => "EMA",
            Rule::Mom => "MOM",
            Rule::Kd => "KD",
            Rule::Macd => "MACD",
            Rule::Rsi => "RSI",
            Rule::Psy => "PSY",
            Rule::Cci => "CCI",
            Rule::Ma => "MA",
            Rule::Bias => "BIAS",
            Rule::Roc => "ROC",
            Rule::Dmi => "DMI",
            Rule::Rnd => "RND",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Rule::ALL
            .iter()
            .copied()
            .find(|r| r.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownRule(s.to_string()))
    }
}

/// Knobs that change how a rule's indicators are computed.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RuleOptions {
    pub ema_alpha: EmaAlpha,
    pub dmi_convention: DmiConvention,
    /// Place the MOM cross level at 0 instead of 100. The ratio form of MOM
    /// is always positive, so with this set the rule can never fire.
    pub mom_zero_level: bool,
}

/// One side of a cross, resolvable against a price series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Operand {
    /// The close price itself.
    Close,
    Sma(usize),
    Ema(usize),
    Mom(usize),
    Roc(usize),
    StochK(usize),
    StochD(usize, usize),
    Macd(usize, usize),
    Rsi(usize),
    Psy(usize),
    Cci(usize),
    Bias(usize),
    DiPlus(usize),
    DiMinus(usize),
    Constant(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Up,
    Down,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GuardCmp {
    Below,
    Above,
}

/// Extra condition on a third series, checked at the cross bar.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Guard {
    pub operand: Operand,
    pub cmp: GuardCmp,
    pub level: f64,
}

/// A directional cross of `left` over `right`, optionally guarded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossSpec {
    pub left: Operand,
    pub right: Operand,
    pub direction: Direction,
    pub guard: Option<Guard>,
}

/// A complete rule: its Buy cross, its Sell cross, and the lookbacks used.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleSpec {
    pub rule: Rule,
    pub params: IndicatorParams,
    pub buy: CrossSpec,
    pub sell: CrossSpec,
    pub options: RuleOptions,
}

impl RuleSpec {
    /// The rule with its rule-table parameters and crosses.
    pub fn table_default(rule: Rule) -> Self {
        Self::with_options(rule, RuleOptions::default())
    }

    pub fn with_options(rule: Rule, options: RuleOptions) -> Self {
        let cross = |left, right, direction, guard| CrossSpec {
            left,
            right,
            direction,
            guard,
        };
        let (params, buy, sell) = match rule {
            Rule::Sma => (
                IndicatorParams::single(20),
                cross(Operand::Sma(20), Operand::Close, Direction::Up, None),
                cross(Operand::Sma(20), Operand::Close, Direction::Down, None),
            ),
            Rule::Ema => (
                IndicatorParams::pair(5, 20),
                cross(Operand::Ema(5), Operand::Ema(20), Direction::Up, None),
                cross(Operand::Ema(5), Operand::Ema(20), Direction::Down, None),
            ),
            Rule::Mom => {
                let level = if options.mom_zero_level { 0.0 } else { 100.0 };
                (
                    IndicatorParams::single(10),
                    cross(Operand::Mom(10), Operand::Constant(level), Direction::Up, None),
                    cross(Operand::Mom(10), Operand::Constant(level), Direction::Down, None),
                )
            }
            Rule::Kd => (
                IndicatorParams::pair(12, 12),
                cross(
                    Operand::StochK(12),
                    Operand::StochD(12, 12),
                    Direction::Up,
                    Some(Guard {
                        operand: Operand::StochD(12, 12),
                        cmp: GuardCmp::Below,
                        level: 20.0,
                    }),
                ),
                cross(
                    Operand::StochK(12),
                    Operand::StochD(12, 12),
                    Direction::Down,
                    Some(Guard {
                        operand: Operand::StochD(12, 12),
                        cmp: GuardCmp::Above,
                        level: 80.0,
                    }),
                ),
            ),
            Rule::Macd => (
                IndicatorParams::pair(12, 26),
                cross(Operand::Macd(12, 26), Operand::Constant(0.0), Direction::Up, None),
                cross(Operand::Macd(12, 26), Operand::Constant(0.0), Direction::Down, None),
            ),
            Rule::Rsi => (
                IndicatorParams::single(14),
                cross(Operand::Rsi(14), Operand::Constant(30.0), Direction::Up, None),
                cross(Operand::Rsi(14), Operand::Constant(70.0), Direction::Down, None),
            ),
            Rule::Psy => (
                IndicatorParams::single(10),
                cross(Operand::Psy(10), Operand::Constant(0.25), Direction::Up, None),
                cross(Operand::Psy(10), Operand::Constant(0.75), Direction::Down, None),
            ),
            Rule::Cci => (
                IndicatorParams::single(9),
                cross(Operand::Cci(9), Operand::Constant(-100.0), Direction::Up, None),
                cross(Operand::Cci(9), Operand::Constant(100.0), Direction::Down, None),
            ),
            Rule::Ma => (
                IndicatorParams::pair(5, 20),
                cross(Operand::Sma(5), Operand::Sma(20), Direction::Up, None),
                cross(Operand::Sma(5), Operand::Sma(20), Direction::Down, None),
            ),
            Rule::Bias => (
                IndicatorParams::single(10),
                cross(Operand::Bias(10), Operand::Constant(-0.045), Direction::Up, None),
                cross(Operand::Bias(10), Operand::Constant(0.05), Direction::Down, None),
            ),
            Rule::Roc => (
                IndicatorParams::single(13),
                cross(Operand::Roc(13), Operand::Constant(0.0), Direction::Up, None),
                cross(Operand::Roc(13), Operand::Constant(0.0), Direction::Down, None),
            ),
            Rule::Dmi => (
                IndicatorParams::single(14),
                cross(Operand::DiPlus(14), Operand::DiMinus(14), Direction::Up, None),
                cross(Operand::DiPlus(14), Operand::DiMinus(14), Direction::Down, None),
            ),
            Rule::Rnd => {
                // RND has no crosses; placeholder specs are never evaluated.
                let placeholder = cross(
                    Operand::Constant(0.0),
                    Operand::Constant(1.0),
                    Direction::Up,
                    None,
                );
                (
                    IndicatorParams::single(1),
                    placeholder,
                    CrossSpec {
                        direction: Direction::Down,
                        ..placeholder
                    },
                )
            }
        };
        Self {
            rule,
            params,
            buy,
            sell,
            options,
        }
    }
}

/// Did `x` cross `y` between `t-1` and `t`?
///
/// Up-cross: `x_prev <= y_prev` and `x_now > y_now`; down-cross mirrored.
/// Any undefined value means no cross.
pub fn detect_cross(
    x_prev: Option<f64>,
    x_now: Option<f64>,
    y_prev: Option<f64>,
    y_now: Option<f64>,
    direction: Direction,
) -> bool {
    let (Some(xp), Some(xn), Some(yp), Some(yn)) = (x_prev, x_now, y_prev, y_now) else {
        return false;
    };
    match direction {
        Direction::Up => xp <= yp && xn > yn,
        Direction::Down => xp >= yp && xn < yn,
    }
}

/// An operand resolved against one concrete price series.
#[derive(Clone)]
enum Resolved {
    Indicator(Rc<IndicatorSeries>),
    Close(Rc<Vec<f64>>),
    Constant(f64),
}

impl Resolved {
    fn get(&self, t: usize) -> Option<f64> {
        match self {
            Resolved::Indicator(s) => s.get(t),
            Resolved::Close(c) => c.get(t).copied(),
            Resolved::Constant(v) => Some(*v),
        }
    }
}

struct OperandCache<'a> {
    series: &'a PriceSeries,
    closes: Rc<Vec<f64>>,
    options: RuleOptions,
    resolved: Vec<(Operand, Resolved)>,
}

impl<'a> OperandCache<'a> {
    fn new(series: &'a PriceSeries, options: RuleOptions) -> Self {
        Self {
            series,
            closes: Rc::new(series.closes()),
            options,
            resolved: Vec::new(),
        }
    }

    fn resolve(&mut self, operand: Operand) -> Result<Resolved> {
        if let Some((_, r)) = self.resolved.iter().find(|(o, _)| *o == operand) {
            return Ok(r.clone());
        }
        let closes = &self.closes;
        let alpha = self.options.ema_alpha;
        let resolved = match operand {
            Operand::Close => Resolved::Close(Rc::clone(closes)),
            Operand::Constant(v) => Resolved::Constant(v),
            Operand::Sma(n) => Resolved::Indicator(Rc::new(indicators::sma(closes, n)?)),
            Operand::Ema(n) => Resolved::Indicator(Rc::new(indicators::ema(closes, n, alpha)?)),
            Operand::Mom(n) => Resolved::Indicator(Rc::new(indicators::momentum_family(
                closes,
                n,
                MomentumKind::Mom,
            )?)),
            Operand::Roc(n) => Resolved::Indicator(Rc::new(indicators::momentum_family(
                closes,
                n,
                MomentumKind::Roc,
            )?)),
            Operand::StochK(n) => {
                let (k, d) = indicators::stochastic_kd(self.series, n, n)?;
                // Cache the sibling too; the KD rule reads both.
                self.resolved
                    .push((Operand::StochD(n, n), Resolved::Indicator(Rc::new(d))));
                Resolved::Indicator(Rc::new(k))
            }
            Operand::StochD(n, m) => {
                let (k, d) = indicators::stochastic_kd(self.series, n, m)?;
                self.resolved
                    .push((Operand::StochK(n), Resolved::Indicator(Rc::new(k))));
                Resolved::Indicator(Rc::new(d))
            }
            Operand::Macd(fast, slow) => {
                Resolved::Indicator(Rc::new(indicators::macd_line(closes, fast, slow, alpha)?))
            }
            Operand::Rsi(n) => Resolved::Indicator(Rc::new(indicators::rsi(closes, n)?)),
            Operand::Psy(n) => Resolved::Indicator(Rc::new(indicators::psy(closes, n)?)),
            Operand::Cci(n) => Resolved::Indicator(Rc::new(indicators::cci(self.series, n)?)),
            Operand::Bias(n) => Resolved::Indicator(Rc::new(indicators::bias(closes, n)?)),
            Operand::DiPlus(n) => {
                let (plus, minus) = indicators::dmi(self.series, n, self.options.dmi_convention)?;
                self.resolved
                    .push((Operand::DiMinus(n), Resolved::Indicator(Rc::new(minus))));
                Resolved::Indicator(Rc::new(plus))
            }
            Operand::DiMinus(n) => {
                let (plus, minus) = indicators::dmi(self.series, n, self.options.dmi_convention)?;
                self.resolved
                    .push((Operand::DiPlus(n), Resolved::Indicator(Rc::new(plus))));
                Resolved::Indicator(Rc::new(minus))
            }
        };
        self.resolved.push((operand, resolved.clone()));
        Ok(resolved)
    }
}

struct CompiledCross {
    left: Resolved,
    right: Resolved,
    direction: Direction,
    guard: Option<(Resolved, GuardCmp, f64)>,
}

impl CompiledCross {
    fn fires(&self, t: usize) -> bool {
        if t == 0 {
            return false;
        }
        let crossed = detect_cross(
            self.left.get(t - 1),
            self.left.get(t),
            self.right.get(t - 1),
            self.right.get(t),
            self.direction,
        );
        if !crossed {
            return false;
        }
        match &self.guard {
            None => true,
            Some((series, cmp, level)) => match series.get(t) {
                None => false,
                Some(v) => match cmp {
                    GuardCmp::Below => v < *level,
                    GuardCmp::Above => v > *level,
                },
            },
        }
    }
}

fn compile_cross(cache: &mut OperandCache<'_>, spec: &CrossSpec) -> Result<CompiledCross> {
    Ok(CompiledCross {
        left: cache.resolve(spec.left)?,
        right: cache.resolve(spec.right)?,
        direction: spec.direction,
        guard: match &spec.guard {
            None => None,
            Some(g) => Some((cache.resolve(g.operand)?, g.cmp, g.level)),
        },
    })
}

/// Scan a series and emit the rule's Buy/Sell events.
///
/// A bar where both crosses fire emits nothing (the contradiction is
/// suppressed). The stream is raw: it may open long twice in a row; pairing
/// into positions is the backtester's job.
pub fn generate_signals(spec: &RuleSpec, series: &PriceSeries) -> Result<SignalSeries> {
    if spec.rule == Rule::Rnd {
        return Err(Error::arg(
            "the RND rule is generated from an rng; use random_signals",
        ));
    }
    let mut cache = OperandCache::new(series, spec.options);
    let buy = compile_cross(&mut cache, &spec.buy)?;
    let sell = compile_cross(&mut cache, &spec.sell)?;
    let mut events = Vec::new();
    for t in 1..series.len() {
        let buy_fires = buy.fires(t);
        let sell_fires = sell.fires(t);
        match (buy_fires, sell_fires) {
            (true, true) | (false, false) => {}
            (true, false) => events.push(SignalEvent {
                index: t,
                kind: SignalKind::Buy,
            }),
            (false, true) => events.push(SignalEvent {
                index: t,
                kind: SignalKind::Sell,
            }),
        }
    }
    Ok(SignalSeries { events })
}

/// Alternating Buy/Sell events at random gaps, starting with Buy.
///
/// Gaps are uniform integers on `[min_gap, max_gap]`; event indices are the
/// running gap sums, kept strictly below `horizon`. Deterministic given the
/// rng state.
pub fn random_signals(
    rng: &mut impl Rng,
    horizon: usize,
    min_gap: usize,
    max_gap: usize,
) -> Result<SignalSeries> {
    if min_gap < 1 || min_gap > max_gap {
        return Err(Error::arg(format!(
            "gap bounds must satisfy 1 <= min_gap <= max_gap, got [{min_gap}, {max_gap}]"
        )));
    }
    let mut events = Vec::new();
    let mut t = 0usize;
    let mut kind = SignalKind::Buy;
    loop {
        t += rng.random_range(min_gap..=max_gap);
        if t >= horizon {
            break;
        }
        events.push(SignalEvent { index: t, kind });
        kind = match kind {
            SignalKind::Buy => SignalKind::Sell,
            SignalKind::Sell => SignalKind::Buy,
        };
    }
    Ok(SignalSeries { events })
}
