use super::dopri::{integrate, Event, IntegrateError, Options, Segment};

pub(crate) struct Driven<const N: usize> {
    pub t: f64,
    pub y: [f64; N],
    pub segments: Vec<Segment<N>>,
    /// Accepted step ends, starting with the initial state.
    pub knots: Vec<(f64, [f64; N])>,
    /// Times at which coordinate `switch` changed sign.
    pub switch_times: Vec<f64>,
    /// Index into `stops` of the event that ended the run.
    pub stopped: Option<usize>,
}

/// Runs the integrator across sign changes of `y[switch]`, where the field
/// is only piecewise smooth. At each change the state is snapped onto
/// `y[switch] = 0` and integration restarts with `side` flipped to the sign of
/// the new half-space, which `rhs` uses for one-sided limits.
#[allow(clippy::too_many_arguments)]
pub(crate) fn drive<const N: usize>(
    rhs: impl Fn(f64, &[f64; N]) -> [f64; N],
    switch: usize,
    side0: f64,
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    opts: &Options,
    stops: &[&Event<'_, N>],
) -> Result<Driven<N>, IntegrateError> {
    let mut out = Driven {
        t: t0,
        y: y0,
        segments: Vec::new(),
        knots: vec![(t0, y0)],
        switch_times: Vec::new(),
        stopped: None,
    };
    let mut side = side0;
    let mut budget = opts.max_steps;
    let sw = Event::new(0, move |_, y: &[f64; N]| y[switch]);
    loop {
        let mut events: Vec<&Event<'_, N>> = vec![&sw];
        events.extend_from_slice(stops);
        let o = Options {
            max_steps: budget,
            ..*opts
        };
        let s = side;
        let r = integrate(|_, y| rhs(s, y), out.t, out.y, t_end, &o, &events)?;
        budget = budget.saturating_sub(r.steps);
        for seg in &r.segments {
            out.knots.push((seg.t1(), seg.eval(seg.t1())));
        }
        out.segments.extend(r.segments);
        out.t = r.t;
        out.y = r.y;
        match r.event {
            None => return Ok(out),
            Some(0) => {
                side = -side;
                out.y[switch] = 0.0;
                if let Some(k) = out.knots.last_mut() {
                    k.1 = out.y;
                }
                out.switch_times.push(out.t);
                if budget == 0 {
                    return Err(IntegrateError::StepLimit(opts.max_steps));
                }
            }
            Some(j) => {
                out.stopped = Some(j - 1);
                if let Some(k) = out.knots.last_mut() {
                    k.1 = out.y;
                }
                return Ok(out);
            }
        }
    }
}
