public class Answer {
    public static int spread(int seeds, int rounds) {
        int planted = 0;
        int round = 0;
        while (round < rounds) {
            for (int s = 0; s < seeds; s++) {
                planted = planted + 1;
            }
            round = round + 1;
        }
        return planted;
    }
}
