public class Answer {
    public static int weave(int rows) {
        int knots = 0;
        int skipped = 0;
        for (int r = 0; r < rows; r++) {
            if (r % 2 == 1) {
                for (int k = 0; k < r; k++) {
                    knots = knots + 1;
                }
            } else {
                skipped = skipped + 1;
            }
        }
        return knots + skipped;
    }
}
