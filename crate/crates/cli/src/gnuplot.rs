//! gnuplot scripts for the figure CSVs. Plain text with no timestamps, so
//! repeated runs produce identical files.

pub fn figure1(csv: &str, binding_energy_mev: f64) -> String {
    format!(
        "\
set datafile separator ','
set terminal pngcairo size 900,600
set output 'figure1.png'
set title 'Hulthén well, its hard-core partner and the no-core well'
set xlabel 'r [fm]'
set ylabel 'V(r) [MeV]'
set xrange [0:24]
set yrange [-60:60]
set key top right
set grid
plot '{csv}' using 1:2 with lines lw 2 title 'Hulthén V', \\
     '' using 1:3 with lines lw 2 title 'partner (hard core)', \\
     '' using 1:4 with lines lw 2 dt 2 title 'no-core Hulthén', \\
     '' using 1:5 with lines lw 1 dt 3 title 'E_d = {binding_energy_mev} MeV'
"
    )
}

pub fn figure2(csv: &str) -> String {
    format!(
        "\
set datafile separator ','
set terminal pngcairo size 900,600
set output 'figure2.png'
set title 'Ground-state probability densities'
set xlabel 'x = r / alpha'
set ylabel '|psi(x)|^2'
set key top right
set grid
plot '{csv}' using 1:2 with lines lw 2 title 'no-core |psi_H|^2', \\
     '' using 1:3 with lines lw 2 title 'hard-core |psi~|^2'
"
    )
}
