public class Answer {
    public static int filterSum(int n, int cap) {
        int sum = 0;
        int kept = 0;
        if (cap > 0) {
            for (int i = 0; i < n; i++) {
                if (i < cap) {
                    sum = sum + i;
                    kept = kept + 1;
                }
            }
        }
        return sum + kept;
    }
}
