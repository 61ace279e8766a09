//! Wang tile sets, their determinism classes, the translation between
//! tiles and automata, and finite tiling search.
//!
//! A tile carries one color per side (west, south, east, north). A tiling
//! of a grid must match colors on shared edges. Every tile corresponds to
//! a transition `west -south/north-> east`, which makes tile sets and
//! automata two views of the same data: vertical color matching is
//! function composition, horizontal matching is state succession.

use serde::{Deserialize, Serialize};

use crate::automaton::{Automaton, LetterId, StateId, Transition};
use crate::error::{Error, Result};

/// Index of a color in a tile set's color list.
pub type ColorId = u32;

/// One Wang tile, by color indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tile {
    pub west: ColorId,
    pub south: ColorId,
    pub east: ColorId,
    pub north: ColorId,
}

/// A finite set of Wang tiles over a finite color set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TileSet {
    colors: Vec<String>,
    tiles: Vec<Tile>,
}

/// Uniqueness of tiles per color pair on two sides, for the four corner
/// pairs, plus their conjunction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeterminismReport {
    pub sw: bool,
    pub se: bool,
    pub nw: bool,
    pub ne: bool,
    pub four_way: bool,
}

impl TileSet {
    pub fn from_parts(colors: Vec<String>, mut tiles: Vec<Tile>) -> Result<TileSet> {
        if colors.is_empty() {
            return Err(Error::InvalidArgument("color set must be non-empty".into()));
        }
        for (i, c) in colors.iter().enumerate() {
            if colors[..i].contains(c) {
                return Err(Error::InvalidArgument(format!("duplicate color {c:?}")));
            }
        }
        let bound = colors.len() as u32;
        for t in &tiles {
            if t.west >= bound || t.south >= bound || t.east >= bound || t.north >= bound {
                return Err(Error::InputError("tile references unknown color".into()));
            }
        }
        tiles.sort_unstable();
        tiles.dedup();
        Ok(TileSet { colors, tiles })
    }

    pub fn colors(&self) -> &[String] {
        &self.colors
    }

    pub fn tiles(&self) -> &[Tile] {
        &self.tiles
    }

    pub fn color_id(&self, name: &str) -> Option<ColorId> {
        self.colors.iter().position(|c| c == name).map(|i| i as u32)
    }

    /// Checks per-corner uniqueness by counting tiles per color pair.
    pub fn determinism_report(&self) -> DeterminismReport {
        let unique = |key: fn(&Tile) -> (ColorId, ColorId)| -> bool {
            let mut seen = std::collections::HashSet::new();
            self.tiles.iter().all(|t| seen.insert(key(t)))
        };
        let sw = unique(|t| (t.south, t.west));
        let se = unique(|t| (t.south, t.east));
        let nw = unique(|t| (t.north, t.west));
        let ne = unique(|t| (t.north, t.east));
        DeterminismReport {
            sw,
            se,
            nw,
            ne,
            four_way: sw && se && nw && ne,
        }
    }

    /// The associated automaton: states and alphabet are the colors and
    /// every tile becomes the transition `west -south/north-> east`.
    pub fn to_automaton(&self) -> Automaton {
        let transitions = self
            .tiles
            .iter()
            .map(|t| Transition {
                from: StateId(t.west),
                input: LetterId(t.south),
                output: LetterId(t.north),
                to: StateId(t.east),
            })
            .collect();
        Automaton::from_parts(
            self.colors.clone(),
            std::sync::Arc::new(self.colors.clone()),
            transitions,
        )
    }

    /// Canonical JSON rendering.
    pub fn to_json(&self) -> String {
        let tiles: Vec<serde_json::Value> = self
            .tiles
            .iter()
            .map(|t| {
                serde_json::json!({
                    "w": self.colors[t.west as usize],
                    "s": self.colors[t.south as usize],
                    "e": self.colors[t.east as usize],
                    "n": self.colors[t.north as usize],
                })
            })
            .collect();
        serde_json::json!({ "colors": self.colors, "tiles": tiles }).to_string()
    }

    pub fn from_json(text: &str) -> Result<TileSet> {
        #[derive(Deserialize)]
        struct TileJson {
            w: String,
            s: String,
            e: String,
            n: String,
        }
        #[derive(Deserialize)]
        struct TileSetJson {
            colors: Vec<String>,
            tiles: Vec<TileJson>,
        }
        let raw: TileSetJson =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let lookup = |name: &str| -> Result<ColorId> {
            raw.colors
                .iter()
                .position(|c| c == name)
                .map(|i| i as u32)
                .ok_or_else(|| Error::InputError(format!("unknown color {name:?}")))
        };
        let mut tiles = Vec::with_capacity(raw.tiles.len());
        for t in &raw.tiles {
            tiles.push(Tile {
                west: lookup(&t.w)?,
                south: lookup(&t.s)?,
                east: lookup(&t.e)?,
                north: lookup(&t.n)?,
            });
        }
        TileSet::from_parts(raw.colors, tiles)
    }
}

/// The tile set of an automaton: every transition `q -a/b-> p` becomes the
/// tile `(west q, south a, east p, north b)`; colors are the state names
/// merged with the letter names.
pub fn automaton_to_tiles(automaton: &Automaton) -> TileSet {
    let mut colors: Vec<String> = automaton.states().to_vec();
    for l in automaton.alphabet() {
        if !colors.contains(l) {
            colors.push(l.clone());
        }
    }
    let find = |name: &str| colors.iter().position(|c| c == name).unwrap() as u32;
    let state_color: Vec<u32> = automaton.states().iter().map(|s| find(s)).collect();
    let letter_color: Vec<u32> = automaton.alphabet().iter().map(|l| find(l)).collect();
    let tiles = automaton
        .transitions()
        .iter()
        .map(|t| Tile {
            west: state_color[t.from.idx()],
            south: letter_color[t.input.idx()],
            east: state_color[t.to.idx()],
            north: letter_color[t.output.idx()],
        })
        .collect();
    TileSet::from_parts(colors, tiles).expect("colors come from valid automaton names")
}

/// A tiling of a `width x height` rectangle with free boundary. Cells are
/// stored row-major with `(x, y)` at `y * width + x`; `y` counts upward.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareTiling {
    pub width: usize,
    pub height: usize,
    /// Tile indices into the originating tile set.
    pub cells: Vec<usize>,
}

/// A rectangle tiling whose horizontal and vertical wrap-around edges also
/// match; repeating it tiles the whole plane periodically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusTiling {
    pub width: usize,
    pub height: usize,
    pub cells: Vec<usize>,
}

impl SquareTiling {
    pub fn tile_at(&self, x: usize, y: usize) -> usize {
        self.cells[y * self.width + x]
    }

    /// Checks all interior adjacency constraints.
    pub fn is_valid(&self, tiles: &TileSet) -> bool {
        valid_grid(tiles, self.width, self.height, &self.cells, false)
    }
}

impl TorusTiling {
    pub fn tile_at(&self, x: usize, y: usize) -> usize {
        self.cells[y * self.width + x]
    }

    /// Checks interior and wrap-around adjacency constraints.
    pub fn is_valid(&self, tiles: &TileSet) -> bool {
        valid_grid(tiles, self.width, self.height, &self.cells, true)
    }
}

fn valid_grid(tiles: &TileSet, width: usize, height: usize, cells: &[usize], wrap: bool) -> bool {
    if cells.len() != width * height || cells.iter().any(|&i| i >= tiles.tiles().len()) {
        return false;
    }
    let tile = |x: usize, y: usize| tiles.tiles()[cells[y * width + x]];
    for y in 0..height {
        for x in 0..width {
            let t = tile(x, y);
            if x + 1 < width && t.east != tile(x + 1, y).west {
                return false;
            }
            if y + 1 < height && t.north != tile(x, y + 1).south {
                return false;
            }
            if wrap && x + 1 == width && t.east != tile(0, y).west {
                return false;
            }
            if wrap && y + 1 == height && t.north != tile(x, 0).south {
                return false;
            }
        }
    }
    true
}

/// Searches for a tiling of the `size x size` square with free boundary.
/// Cells are filled row-major and tiles tried in source order, so the
/// result is deterministic; `None` means no tiling exists.
pub fn tile_square(tiles: &TileSet, size: usize) -> Result<Option<SquareTiling>> {
    if size == 0 {
        return Err(Error::InvalidArgument("square size must be >= 1".into()));
    }
    let cells = backtrack_grid(tiles, size, size, false);
    Ok(cells.map(|cells| SquareTiling {
        width: size,
        height: size,
        cells,
    }))
}

/// Searches for the smallest torus tiling within the bounds, smallest area
/// first, ties broken by (width, height).
pub fn find_torus_tiling(
    tiles: &TileSet,
    max_width: usize,
    max_height: usize,
) -> Result<Option<TorusTiling>> {
    if max_width == 0 || max_height == 0 {
        return Err(Error::InvalidArgument("torus bounds must be >= 1".into()));
    }
    let mut shapes: Vec<(usize, usize)> = (1..=max_width)
        .flat_map(|w| (1..=max_height).map(move |h| (w, h)))
        .collect();
    shapes.sort_by_key(|&(w, h)| (w * h, w, h));
    for (w, h) in shapes {
        if let Some(cells) = backtrack_grid(tiles, w, h, true) {
            return Ok(Some(TorusTiling {
                width: w,
                height: h,
                cells,
            }));
        }
    }
    Ok(None)
}

fn backtrack_grid(tiles: &TileSet, width: usize, height: usize, wrap: bool) -> Option<Vec<usize>> {
    let set = tiles.tiles();
    if set.is_empty() {
        return None;
    }
    let total = width * height;
    let mut cells: Vec<usize> = Vec::with_capacity(total);
    let fits = |cells: &[usize], candidate: usize| -> bool {
        let pos = cells.len();
        let (x, y) = (pos % width, pos / width);
        let t = set[candidate];
        if x > 0 && set[cells[pos - 1]].east != t.west {
            return false;
        }
        if y > 0 && set[cells[pos - width]].north != t.south {
            return false;
        }
        if wrap && x + 1 == width {
            // In a one-column grid the candidate is its own west neighbour.
            let west = if width == 1 { t } else { set[cells[y * width]] };
            if t.east != west.west {
                return false;
            }
        }
        if wrap && y + 1 == height {
            let south = if height == 1 { t } else { set[cells[x]] };
            if t.north != south.south {
                return false;
            }
        }
        true
    };
    let mut next_choice = 0usize;
    loop {
        if next_choice < set.len() && fits(&cells, next_choice) {
            cells.push(next_choice);
            if cells.len() == total {
                return Some(cells);
            }
            next_choice = 0;
        } else if next_choice < set.len() {
            next_choice += 1;
        } else {
            // Exhausted this cell; backtrack.
            {
                let prev = cells.pop()?;
                next_choice = prev + 1
            }
        }
    }
}

/// Whether `size` stacked runs of length `size` exist: a word and a state
/// column such that every state transduces the previous run's output —
/// the transducer counterpart of tiling the square.
///
/// Advances a frontier of state columns letter by letter, branching over
/// non-deterministic transitions; the frontier starts from all
/// `|Q|^size` columns, so this is only meant for small instances (the
/// search space is capped).
pub fn exists_defined_path(automaton: &Automaton, size: usize) -> Result<bool> {
    if size == 0 {
        return Err(Error::InvalidArgument("path length must be >= 1".into()));
    }
    if automaton.properties().complete {
        return Ok(true);
    }
    let n = automaton.state_count();
    let space = (n as f64).powi(size as i32);
    if space > 2_000_000.0 {
        return Err(Error::InvalidArgument(format!(
            "defined-path search space {n}^{size} is too large"
        )));
    }
    // All columns of height `size`.
    let mut frontier: std::collections::HashSet<Vec<StateId>> =
        std::collections::HashSet::new();
    let mut stack: Vec<Vec<StateId>> = vec![vec![]];
    while let Some(col) = stack.pop() {
        if col.len() == size {
            frontier.insert(col);
            continue;
        }
        for q in 0..n as u32 {
            let mut col = col.clone();
            col.push(StateId(q));
            stack.push(col);
        }
    }
    for _ in 0..size {
        let mut next = std::collections::HashSet::new();
        for col in &frontier {
            for a in 0..automaton.letter_count() as u32 {
                // The column reads one letter bottom-up: each state
                // consumes the previous state's output, branching over
                // every transition.
                let mut partial: Vec<(LetterId, Vec<StateId>)> = vec![(LetterId(a), Vec::new())];
                for &q in col {
                    let mut advanced = Vec::new();
                    for (cur, tail) in &partial {
                        for t in automaton.successors(q, *cur) {
                            let mut tail = tail.clone();
                            tail.push(t.to);
                            advanced.push((t.output, tail));
                        }
                    }
                    partial = advanced;
                    if partial.is_empty() {
                        break;
                    }
                }
                for (_, advanced) in partial {
                    next.insert(advanced);
                }
            }
        }
        if next.is_empty() {
            return Ok(false);
        }
        frontier = next;
    }
    Ok(true)
}

/// Extracts a torus from a rectangle whose top and bottom color rows
/// match, by finding two equal column boundaries within `width_bound`.
///
/// The block between two equal boundaries wraps horizontally by choice and
/// vertically by the row recurrence, so its repetition tiles the plane.
pub fn extract_torus_from_recurrent_strip(
    tiles: &TileSet,
    strip: &SquareTiling,
    width_bound: usize,
) -> Result<TorusTiling> {
    if !strip.is_valid(tiles) {
        return Err(Error::InputError("strip is not a valid tiling".into()));
    }
    let set = tiles.tiles();
    let recurrent = (0..strip.width).all(|x| {
        set[strip.tile_at(x, strip.height - 1)].north == set[strip.tile_at(x, 0)].south
    });
    if !recurrent {
        return Err(Error::InputError(
            "strip is not recurrent: top and bottom color rows differ".into(),
        ));
    }
    // Boundary x carries the west colors of column x (the east colors of
    // column x-1); boundary `width` is the east side of the last column.
    let boundary = |x: usize| -> Vec<ColorId> {
        (0..strip.height)
            .map(|y| {
                if x < strip.width {
                    set[strip.tile_at(x, y)].west
                } else {
                    set[strip.tile_at(strip.width - 1, y)].east
                }
            })
            .collect()
    };
    let limit = width_bound.min(strip.width);
    let mut seen: Vec<(Vec<ColorId>, usize)> = Vec::new();
    for x in 0..=limit {
        let b = boundary(x);
        if let Some((_, start)) = seen.iter().find(|(prev, _)| *prev == b) {
            let (k, l) = (*start, x);
            let mut cells = Vec::with_capacity((l - k) * strip.height);
            for y in 0..strip.height {
                for col in k..l {
                    cells.push(strip.tile_at(col, y));
                }
            }
            let torus = TorusTiling {
                width: l - k,
                height: strip.height,
                cells,
            };
            debug_assert!(torus.is_valid(tiles));
            return Ok(torus);
        }
        seen.push((b, x));
    }
    Err(Error::WidthBoundExceeded(width_bound))
}

/// Renders a grid as a plain PPM image, one colored square per cell.
pub fn grid_to_ppm(width: usize, height: usize, cells: &[usize], cell_px: usize) -> String {
    let palette = |i: usize| -> (u8, u8, u8) {
        // Spread hues around the circle.
        let h = (i as f64 * 0.618_033_988_749_895).fract() * 6.0;
        let x = (1.0 - (h % 2.0 - 1.0).abs()) * 255.0;
        let (r, g, b) = match h as usize {
            0 => (255.0, x, 0.0),
            1 => (x, 255.0, 0.0),
            2 => (0.0, 255.0, x),
            3 => (0.0, x, 255.0),
            4 => (x, 0.0, 255.0),
            _ => (255.0, 0.0, x),
        };
        (r as u8, g as u8, b as u8)
    };
    let (w_px, h_px) = (width * cell_px, height * cell_px);
    let mut out = format!("P3\n{w_px} {h_px}\n255\n");
    for py in 0..h_px {
        // Image rows go top-down; grid rows go bottom-up.
        let y = height - 1 - py / cell_px;
        for px in 0..w_px {
            let x = px / cell_px;
            let (r, g, b) = palette(cells[y * width + x]);
            out.push_str(&format!("{r} {g} {b} "));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;

    fn set(colors: &[&str], tiles: &[(&str, &str, &str, &str)]) -> TileSet {
        let colors: Vec<String> = colors.iter().map(|c| c.to_string()).collect();
        let parsed = tiles
            .iter()
            .map(|(w, s, e, n)| Tile {
                west: colors.iter().position(|c| c == w).unwrap() as u32,
                south: colors.iter().position(|c| c == s).unwrap() as u32,
                east: colors.iter().position(|c| c == e).unwrap() as u32,
                north: colors.iter().position(|c| c == n).unwrap() as u32,
            })
            .collect();
        TileSet::from_parts(colors, parsed).unwrap()
    }

    #[test]
    fn single_tile_is_fully_deterministic() {
        let w = set(&["c"], &[("c", "c", "c", "c")]);
        let report = w.determinism_report();
        assert!(report.four_way && report.sw && report.se && report.nw && report.ne);
        assert!(tile_square(&w, 3).unwrap().is_some());
        let torus = find_torus_tiling(&w, 3, 3).unwrap().unwrap();
        assert_eq!((torus.width, torus.height), (1, 1));
    }

    #[test]
    fn shared_south_west_pair_breaks_sw_determinism() {
        let w = set(
            &["c", "d"],
            &[("c", "c", "c", "c"), ("c", "c", "d", "d")],
        );
        let report = w.determinism_report();
        assert!(!report.sw);
    }

    #[test]
    fn horizontal_mismatch_blocks_squares_beyond_one() {
        let w = set(&["0", "1", "c"], &[("0", "c", "1", "c")]);
        assert!(tile_square(&w, 1).unwrap().is_some());
        assert!(tile_square(&w, 2).unwrap().is_none());
        let aut = w.to_automaton();
        assert!(exists_defined_path(&aut, 1).unwrap());
        assert!(!exists_defined_path(&aut, 2).unwrap());
    }

    #[test]
    fn alternating_tiles_give_a_two_by_one_torus() {
        let w = set(
            &["0", "1", "c"],
            &[("0", "c", "1", "c"), ("1", "c", "0", "c")],
        );
        let torus = find_torus_tiling(&w, 4, 4).unwrap().unwrap();
        assert_eq!((torus.width, torus.height), (2, 1));
        assert!(torus.is_valid(&w));
    }

    #[test]
    fn tiles_automaton_round_trip() {
        let w = set(
            &["r", "g"],
            &[("r", "g", "r", "g"), ("g", "r", "g", "r"), ("r", "r", "g", "g")],
        );
        let back = automaton_to_tiles(&w.to_automaton());
        assert_eq!(back, w);
    }

    #[test]
    fn brandt_translation_flags_match_predicates() {
        let aut = samples::brandt_automaton();
        let tiles = automaton_to_tiles(&aut);
        let report = tiles.determinism_report();
        let props = tiles.to_automaton().properties();
        assert_eq!(report.sw, props.deterministic);
        assert_eq!(report.se, props.reversible);
        assert_eq!(report.nw, props.inverse_deterministic);
        assert_eq!(report.ne, props.inverse_reversible);
    }

    #[test]
    fn strip_extraction_finds_periodic_block() {
        // One repeated tile: the 1x1 torus falls out immediately.
        let w = set(&["c"], &[("c", "c", "c", "c")]);
        let strip = SquareTiling {
            width: 3,
            height: 1,
            cells: vec![0; 3],
        };
        let torus = extract_torus_from_recurrent_strip(&w, &strip, 3).unwrap();
        assert_eq!((torus.width, torus.height), (1, 1));
        // Taller strips keep their height.
        let strip = SquareTiling {
            width: 3,
            height: 2,
            cells: vec![0; 6],
        };
        let torus = extract_torus_from_recurrent_strip(&w, &strip, 3).unwrap();
        assert_eq!((torus.width, torus.height), (1, 2));
        assert!(torus.is_valid(&w));

        // Two alternating columns: the repeat shows up at distance 2.
        let w2 = set(
            &["0", "1", "c"],
            &[("0", "c", "1", "c"), ("1", "c", "0", "c")],
        );
        let strip = SquareTiling {
            width: 4,
            height: 1,
            cells: vec![0, 1, 0, 1],
        };
        let torus = extract_torus_from_recurrent_strip(&w2, &strip, 4).unwrap();
        assert_eq!((torus.width, torus.height), (2, 1));
        assert!(torus.is_valid(&w2));

        // A bound too small to see the repeat errors out.
        let err = extract_torus_from_recurrent_strip(&w2, &strip, 1).unwrap_err();
        assert!(matches!(err, Error::WidthBoundExceeded(1)));
    }

    #[test]
    fn json_round_trip() {
        let w = set(
            &["r", "g"],
            &[("r", "g", "r", "g"), ("g", "r", "g", "r")],
        );
        let json = w.to_json();
        assert_eq!(TileSet::from_json(&json).unwrap(), w);
    }

    #[test]
    fn completeness_means_every_south_west_pair() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        for _ in 0..60 {
            let tiles = crate::random::tile_set(&mut rng, 3, 7);
            let aut = tiles.to_automaton();
            let covered = (0..tiles.colors().len() as u32).all(|w| {
                (0..tiles.colors().len() as u32)
                    .all(|s| tiles.tiles().iter().any(|t| t.west == w && t.south == s))
            });
            assert_eq!(aut.properties().complete, covered);
        }
    }

    #[test]
    fn four_way_deterministic_complete_sets_tile_every_square() {
        // Two colors, all four (south, west) pairs covered, outputs a
        // permutation per pair: the translation of a group automaton.
        let w = set(
            &["0", "1"],
            &[
                ("0", "0", "0", "0"),
                ("0", "1", "0", "1"),
                ("1", "0", "1", "1"),
                ("1", "1", "1", "0"),
            ],
        );
        let report = w.determinism_report();
        assert!(report.four_way);
        assert!(w.to_automaton().properties().complete);
        for size in 1..=5 {
            let tiling = tile_square(&w, size).unwrap().expect("complete sets tile");
            assert!(tiling.is_valid(&w));
        }
    }
}
